pub mod birep;
pub mod flows;
pub mod latticedyn;
pub mod rootdata;
pub mod symfield;
pub mod taucocycle;
