//! Word literal syntax.
//!
//! ```text
//! WORD := ATOM+
//! ATOM := NAME ('^' INTEGER)?
//! ```
//!
//! Atoms are separated by whitespace. `1` denotes the identity.

use crate::error::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    /// `None` for the identity atom `1`.
    pub name: Option<String>,
    pub exp: i64,
    /// Byte offset of the atom, 1-based.
    pub pos: usize,
}

pub fn parse_atoms(text: &str) -> Result<Vec<Atom>, ParseError> {
    let mut atoms = Vec::new();
    let mut rest = text;
    let mut offset = 0;
    loop {
        let trimmed = rest.trim_start();
        offset += rest.len() - trimmed.len();
        if trimmed.is_empty() {
            break;
        }
        let end = trimmed.find(char::is_whitespace).unwrap_or(trimmed.len());
        atoms.push(parse_atom(&trimmed[..end], offset + 1)?);
        offset += end;
        rest = &trimmed[end..];
    }
    if atoms.is_empty() {
        return Err(ParseError::Empty);
    }
    Ok(atoms)
}

fn parse_atom(token: &str, pos: usize) -> Result<Atom, ParseError> {
    let (name, exp) = match token.split_once('^') {
        None => (token, 1),
        Some((name, exp)) => {
            let exp: i64 = exp.parse().map_err(|_| ParseError::Syntax {
                pos: pos + name.len() + 1,
                msg: format!("expected an integer exponent, found `{exp}`"),
            })?;
            (name, exp)
        }
    };
    if name.is_empty() {
        return Err(ParseError::Syntax { pos, msg: "missing generator name".into() });
    }
    if name == "1" {
        return Ok(Atom { name: None, exp, pos });
    }
    if !crate::base::is_valid_name(name) {
        return Err(ParseError::Syntax { pos, msg: format!("invalid generator name `{name}`") });
    }
    Ok(Atom { name: Some(name.to_string()), exp, pos })
}
