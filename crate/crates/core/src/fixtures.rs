//! Embedded example codes.

use crate::code::{parse_code, LdpcCode};
use crate::error::{Error, Result};

pub const NAMES: [&str; 6] = ["ex1-c1", "ex1-c2", "ex1-c3", "ex1-c4", "ex2", "ex3"];

/// Raw text of an embedded fixture.
pub fn text(name: &str) -> Option<&'static str> {
    Some(match name {
        "ex1-c1" => include_str!("../fixtures/ex1-c1.code"),
        "ex1-c2" => include_str!("../fixtures/ex1-c2.code"),
        "ex1-c3" => include_str!("../fixtures/ex1-c3.code"),
        "ex1-c4" => include_str!("../fixtures/ex1-c4.code"),
        "ex2" => include_str!("../fixtures/ex2.code"),
        "ex3" => include_str!("../fixtures/ex3.code"),
        _ => return None,
    })
}

pub fn load(name: &str) -> Result<LdpcCode> {
    let text = text(name).ok_or_else(|| Error::Config(format!("unknown fixture {name:?}")))?;
    parse_code(text)
}
