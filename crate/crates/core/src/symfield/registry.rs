use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

use super::FieldError;

/// Dense integer id of a registered variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub u32);

impl Var {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VarKind {
    Alpha(usize),
    F(usize),
    Atom,
    Aux,
}

#[derive(Clone, Debug)]
struct VarInfo {
    name: String,
    latex: String,
    kind: VarKind,
}

#[derive(Default)]
struct Inner {
    vars: Vec<VarInfo>,
    by_name: HashMap<String, Var>,
}

/// Append-only table of variables.
///
/// Ids are dense and never reused, so polynomials only store ids and the
/// registry is needed solely for rendering and name lookup. Reads take a
/// shared lock; registration is serialized behind the write lock.
#[derive(Default)]
pub struct VarRegistry {
    inner: RwLock<Inner>,
}

impl fmt::Debug for VarRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner = self.inner.read().unwrap();
        f.debug_list()
            .entries(inner.vars.iter().map(|v| &v.name))
            .finish()
    }
}

impl VarRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registry holding `a0..a{n-1}` followed by `f0..f{n-1}`.
    pub fn with_rank(n: usize) -> Self {
        let reg = Self::new();
        for j in 0..n {
            reg.register(&format!("a{j}"), &format!("\\alpha_{{{j}}}"), VarKind::Alpha(j))
                .expect("fresh registry");
        }
        for j in 0..n {
            reg.register(&format!("f{j}"), &format!("f_{{{j}}}"), VarKind::F(j))
                .expect("fresh registry");
        }
        reg
    }

    /// Registers a variable, or returns the existing id if a variable with the
    /// same name and kind is already present.
    pub fn register(&self, name: &str, latex: &str, kind: VarKind) -> Result<Var, FieldError> {
        let mut inner = self.inner.write().unwrap();
        if let Some(&v) = inner.by_name.get(name) {
            if inner.vars[v.index()].kind == kind {
                return Ok(v);
            }
            return Err(FieldError::KindConflict(name.to_string()));
        }
        let id = Var(inner.vars.len() as u32);
        inner.vars.push(VarInfo {
            name: name.to_string(),
            latex: latex.to_string(),
            kind,
        });
        inner.by_name.insert(name.to_string(), id);
        Ok(id)
    }

    /// Registers (or finds) a symbolic atom such as `u01`.
    pub fn atom(&self, name: &str) -> Result<Var, FieldError> {
        let latex = match name.strip_prefix('u') {
            Some(rest) if !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()) => {
                format!("u_{{{rest}}}")
            }
            _ => name.to_string(),
        };
        self.register(name, &latex, VarKind::Atom)
    }

    pub fn aux(&self, name: &str) -> Result<Var, FieldError> {
        self.register(name, name, VarKind::Aux)
    }

    pub fn lookup(&self, name: &str) -> Option<Var> {
        self.inner.read().unwrap().by_name.get(name).copied()
    }

    pub fn alpha(&self, j: usize) -> Option<Var> {
        self.lookup(&format!("a{j}"))
    }

    pub fn f(&self, j: usize) -> Option<Var> {
        self.lookup(&format!("f{j}"))
    }

    pub fn len(&self) -> usize {
        self.inner.read().unwrap().vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, v: Var) -> bool {
        v.index() < self.len()
    }

    pub fn check(&self, v: Var) -> Result<Var, FieldError> {
        if self.contains(v) {
            Ok(v)
        } else {
            Err(FieldError::UnknownVar(v.0))
        }
    }

    pub fn name(&self, v: Var) -> String {
        let inner = self.inner.read().unwrap();
        inner
            .vars
            .get(v.index())
            .map(|i| i.name.clone())
            .unwrap_or_else(|| format!("?{}", v.0))
    }

    pub fn latex(&self, v: Var) -> String {
        let inner = self.inner.read().unwrap();
        inner
            .vars
            .get(v.index())
            .map(|i| i.latex.clone())
            .unwrap_or_else(|| format!("?{}", v.0))
    }

    pub fn kind(&self, v: Var) -> Option<VarKind> {
        self.inner
            .read()
            .unwrap()
            .vars
            .get(v.index())
            .map(|i| i.kind.clone())
    }

    /// All variable names in id order.
    pub fn names(&self) -> Vec<String> {
        self.inner
            .read()
            .unwrap()
            .vars
            .iter()
            .map(|v| v.name.clone())
            .collect()
    }
}
