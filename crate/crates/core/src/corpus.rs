//! Named shadow collections read from PD files.

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use crate::codec::{canonical, parse_pd};
use crate::shadow::Shadow;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub shadow: Shadow,
    /// `file:line` the entry was read from.
    pub provenance: String,
}

#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub entries: Vec<CorpusEntry>,
    /// Non-fatal findings, such as two entries with isomorphic shadows.
    pub warnings: Vec<String>,
}

/// Parses corpus text. Every entry must be a connected shadow and names must
/// be unique; shadows repeated up to isomorphism only produce warnings.
pub fn parse_corpus(text: &str, source: &str) -> Result<Corpus> {
    let mut corpus = Corpus::default();
    let mut names = HashSet::new();
    let mut seen: BTreeMap<String, String> = BTreeMap::new();
    // parse line by line so that every entry knows where it came from
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let parsed = parse_pd(line).map_err(|e| match e {
            Error::Syntax { msg, .. } => Error::Syntax { line: lineno, msg },
            other => Error::Syntax { line: lineno, msg: other.to_string() },
        })?;
        let Some((name, shadow)) = parsed.into_iter().next() else {
            continue;
        };
        if !shadow.is_connected() {
            return Err(Error::Syntax { line: lineno, msg: format!("{name}: shadow is not connected") });
        }
        if !names.insert(name.clone()) {
            return Err(Error::Syntax { line: lineno, msg: format!("duplicate name {name}") });
        }
        let code = canonical(&shadow).0;
        if let Some(first) = seen.get(&code) {
            corpus.warnings.push(format!("{source}:{lineno}: {name} has the same shadow as {first}"));
        } else {
            seen.insert(code, name.clone());
        }
        corpus.entries.push(CorpusEntry { name, shadow, provenance: format!("{source}:{lineno}") });
    }
    Ok(corpus)
}

pub fn load_corpus(path: &Path) -> Result<Corpus> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io { path: path.display().to_string(), msg: e.to_string() })?;
    parse_corpus(&text, &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    const TREFOIL: &str = "3_1: P[(1,4,2,5),(3,6,4,1),(5,2,6,3)]";

    #[test]
    fn duplicate_shadow_is_a_warning() {
        let text = format!("# two trefoils\n{TREFOIL}\n\n3_1m: P[(1,5,2,4),(3,1,4,6),(5,3,6,2)]\n");
        let c = parse_corpus(&text, "mem").unwrap();
        assert_eq!(c.entries.len(), 2);
        assert_eq!(c.warnings.len(), 1);
        assert_eq!(c.entries[1].provenance, "mem:4");
    }

    #[test]
    fn malformed_line_is_named() {
        let text = format!("{TREFOIL}\n4_1: P[(1,2,3,4),(5,6\n");
        assert_eq!(parse_corpus(&text, "mem").unwrap_err().to_string().split(':').next(), Some("line 2"));
    }

    #[test]
    fn duplicate_names_rejected() {
        let text = format!("{TREFOIL}\n{TREFOIL}\n");
        assert!(matches!(parse_corpus(&text, "mem"), Err(Error::Syntax { line: 2, .. })));
    }

    #[test]
    fn missing_file() {
        assert!(matches!(load_corpus(Path::new("/nonexistent/x.pd")), Err(Error::Io { .. })));
    }
}
