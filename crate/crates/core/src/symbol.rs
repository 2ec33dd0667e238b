//! Process-wide interning of generator names.
//!
//! Letters carry a `Gen` handle instead of a string so that words are `Copy`
//! sequences and comparisons are integer comparisons. Interned names live for
//! the rest of the process; alphabets in this domain are tiny.

use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

use crate::error::{Error, Result};

/// Handle to an interned generator name.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gen(u32);

#[derive(Default)]
struct Interner {
    names: Vec<&'static str>,
    ids: HashMap<&'static str, u32>,
}

fn interner() -> &'static RwLock<Interner> {
    static INTERNER: OnceLock<RwLock<Interner>> = OnceLock::new();
    INTERNER.get_or_init(Default::default)
}

/// `[A-Za-z][A-Za-z0-9']*`
pub fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '\'')
}

impl Gen {
    /// Interns `name` after checking it is a legal generator name.
    pub fn new(name: &str) -> Result<Gen> {
        if !is_valid_name(name) {
            return Err(Error::ParseError(format!(
                "invalid generator name `{name}`"
            )));
        }
        Ok(Gen::intern(name))
    }

    pub(crate) fn intern(name: &str) -> Gen {
        if let Some(&id) = interner().read().expect("interner poisoned").ids.get(name) {
            return Gen(id);
        }
        let mut table = interner().write().expect("interner poisoned");
        if let Some(&id) = table.ids.get(name) {
            return Gen(id);
        }
        let id = u32::try_from(table.names.len()).expect("too many generator names");
        let leaked: &'static str = Box::leak(name.to_owned().into_boxed_str());
        table.names.push(leaked);
        table.ids.insert(leaked, id);
        Gen(id)
    }

    pub fn name(self) -> &'static str {
        interner().read().expect("interner poisoned").names[self.0 as usize]
    }
}

impl fmt::Debug for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        let g = Gen::new("a1'").unwrap();
        assert_eq!(g.name(), "a1'");
        assert_eq!(Gen::new("a1'").unwrap(), g);
        assert_ne!(Gen::new("a1").unwrap(), g);
    }

    #[test]
    fn rejects_bad_names() {
        for bad in ["", "1a", "'a", "a-b", "a b", "x_1"] {
            assert!(Gen::new(bad).is_err(), "{bad:?}");
        }
    }
}
