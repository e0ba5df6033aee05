//! Line-oriented model files.
//!
//! ```text
//! SEGBIAS 1 <method>
//! SYM    <char>                      char, bpe
//! MERGE  <left>  <right>             bpe, in rank order
//! PIECE  <piece> <logprob>           unigram, 17 significant digits
//! CAP    <n>                         lmvr, optional
//! MORPH  <morph> <count>             morfessor, lmvr
//! WORD   <word>  <morph morph ...>   morfessor, lmvr
//! ```
//!
//! Fields are tab-separated and every line, including the last, ends in LF.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{MergeTable, Method, MorphLexicon, Payload, SegmentError, SegmentationModel, UnigramModel};

pub const FORMAT_VERSION: &str = "1";
const MAGIC: &str = "SEGBIAS";

pub fn serialize_model(model: &SegmentationModel) -> String {
    let mut out = format!("{MAGIC} {FORMAT_VERSION} {}\n", model.method());
    let syms = |out: &mut String| {
        for c in model.alphabet() {
            let _ = writeln!(out, "SYM\t{c}");
        }
    };
    match model.payload() {
        Payload::Char => syms(&mut out),
        Payload::Bpe(merges) => {
            syms(&mut out);
            for (l, r) in merges.merges() {
                let _ = writeln!(out, "MERGE\t{l}\t{r}");
            }
        }
        Payload::Unigram(m) => {
            for (piece, lp) in m.entries() {
                let _ = writeln!(out, "PIECE\t{piece}\t{lp:.16e}");
            }
        }
        Payload::Morph(lex) => {
            if let Some(cap) = lex.cap() {
                let _ = writeln!(out, "CAP\t{cap}");
            }
            for (m, c) in lex.entries() {
                let _ = writeln!(out, "MORPH\t{m}\t{c}");
            }
            for (w, parts) in lex.analyses() {
                let _ = writeln!(out, "WORD\t{w}\t{}", parts.join(" "));
            }
        }
    }
    out
}

pub fn save_model(model: &SegmentationModel, path: impl AsRef<Path>) -> Result<(), SegmentError> {
    let path = path.as_ref();
    fs::write(path, serialize_model(model)).map_err(|source| SegmentError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_model(path: impl AsRef<Path>) -> Result<SegmentationModel, SegmentError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| SegmentError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_model(&text)
}

fn malformed(line: usize, reason: impl Into<String>) -> SegmentError {
    SegmentError::MalformedLine {
        line,
        reason: reason.into(),
    }
}

fn single_char(field: &str, line: usize) -> Result<char, SegmentError> {
    let mut it = field.chars();
    match (it.next(), it.next()) {
        (Some(c), None) if !c.is_whitespace() => Ok(c),
        _ => Err(malformed(line, format!("expected a single character, got {field:?}"))),
    }
}

fn token(field: &str, line: usize) -> Result<String, SegmentError> {
    if field.is_empty() || field.chars().any(char::is_whitespace) {
        return Err(malformed(line, format!("invalid piece {field:?}")));
    }
    Ok(field.to_string())
}

/// Record kinds in the order they must appear.
const SECTIONS: [&str; 6] = ["SYM", "MERGE", "PIECE", "CAP", "MORPH", "WORD"];

fn allowed(method: Method, kind: &str) -> bool {
    matches!(
        (method, kind),
        (Method::Char, "SYM")
            | (Method::Bpe, "SYM" | "MERGE")
            | (Method::Unigram, "PIECE")
            | (Method::Lmvr, "CAP")
            | (Method::Morfessor | Method::Lmvr, "MORPH" | "WORD")
    )
}

pub fn parse_model(text: &str) -> Result<SegmentationModel, SegmentError> {
    let mut lines: Vec<&str> = text.split('\n').collect();
    let terminated = lines.last() == Some(&"");
    if terminated {
        lines.pop();
    }
    let header = lines.first().ok_or_else(|| malformed(1, "missing header"))?;
    let parts: Vec<&str> = header.split(' ').collect();
    if parts.len() != 3 || parts[0] != MAGIC {
        return Err(malformed(1, format!("expected \"{MAGIC} {FORMAT_VERSION} <method>\"")));
    }
    if parts[1] != FORMAT_VERSION {
        return Err(SegmentError::VersionMismatch(parts[1].to_string()));
    }
    let method: Method = parts[2].parse()?;
    if !terminated {
        return Err(malformed(lines.len(), "truncated file: last line lacks a newline"));
    }

    let mut alphabet = BTreeSet::new();
    let mut merges = Vec::new();
    let mut pieces = Vec::new();
    let mut cap = None;
    let mut morphs = BTreeMap::new();
    let mut analyses = BTreeMap::new();
    let mut section = 0;

    for (idx, raw) in lines.iter().enumerate().skip(1) {
        let n = idx + 1;
        let fields: Vec<&str> = raw.split('\t').collect();
        let kind = fields[0];
        let pos = SECTIONS
            .iter()
            .position(|s| *s == kind)
            .filter(|_| allowed(method, kind))
            .ok_or_else(|| malformed(n, format!("unexpected record {kind:?} in a {method} model")))?;
        if pos < section {
            return Err(malformed(n, format!("{kind} record out of order")));
        }
        section = pos;
        let arity = match kind {
            "SYM" | "CAP" => 2,
            _ => 3,
        };
        if fields.len() != arity {
            return Err(malformed(n, format!("{kind} expects {} fields, found {}", arity - 1, fields.len() - 1)));
        }
        match kind {
            "SYM" => {
                if !alphabet.insert(single_char(fields[1], n)?) {
                    return Err(malformed(n, "duplicate symbol"));
                }
            }
            "MERGE" => merges.push((token(fields[1], n)?, token(fields[2], n)?)),
            "PIECE" => {
                let lp: f64 = fields[2]
                    .parse()
                    .map_err(|_| malformed(n, format!("bad log-probability {:?}", fields[2])))?;
                pieces.push((token(fields[1], n)?, lp));
            }
            "CAP" => {
                if cap.is_some() {
                    return Err(malformed(n, "duplicate CAP"));
                }
                cap = Some(
                    fields[1]
                        .parse::<usize>()
                        .map_err(|_| malformed(n, format!("bad cap {:?}", fields[1])))?,
                );
            }
            "MORPH" => {
                let count: u64 = fields[2]
                    .parse()
                    .map_err(|_| malformed(n, format!("bad count {:?}", fields[2])))?;
                if morphs.insert(token(fields[1], n)?, count).is_some() {
                    return Err(malformed(n, "duplicate morph"));
                }
            }
            "WORD" => {
                let parts: Vec<String> = fields[2].split(' ').map(|m| token(m, n)).collect::<Result<_, _>>()?;
                if analyses.insert(token(fields[1], n)?, parts).is_some() {
                    return Err(malformed(n, "duplicate word"));
                }
            }
            _ => unreachable!(),
        }
    }

    Ok(match method {
        Method::Char => SegmentationModel::char_model(alphabet),
        Method::Bpe => {
            let table = MergeTable::new(merges)?;
            for (l, r) in table.merges() {
                if let Some(c) = l.chars().chain(r.chars()).find(|c| !alphabet.contains(c)) {
                    return Err(SegmentError::InvalidModel(format!("merge uses character {c:?} outside the alphabet")));
                }
            }
            SegmentationModel::bpe(alphabet, table)
        }
        Method::Unigram => SegmentationModel::unigram(UnigramModel::new(pieces)?),
        Method::Morfessor | Method::Lmvr => SegmentationModel::morph(method, MorphLexicon::new(morphs, analyses, cap)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn version_mismatch() {
        assert!(matches!(parse_model("SEGBIAS 2 bpe\n"), Err(SegmentError::VersionMismatch(v)) if v == "2"));
    }

    #[test]
    fn unknown_method() {
        assert!(matches!(parse_model("SEGBIAS 1 wordpiece\n"), Err(SegmentError::UnknownMethod(_))));
    }

    #[test]
    fn truncated_merges() {
        let text = "SEGBIAS 1 bpe\nSYM\ta\nSYM\tb\nMERGE\ta\tb\nMERGE\tab";
        assert!(matches!(parse_model(text), Err(SegmentError::MalformedLine { line: 5, .. })));
        let text = "SEGBIAS 1 bpe\nSYM\ta\nSYM\tb\nMERGE\ta\n";
        assert!(matches!(parse_model(text), Err(SegmentError::MalformedLine { line: 4, .. })));
    }

    #[test]
    fn records_must_match_method() {
        let text = "SEGBIAS 1 char\nSYM\ta\nMERGE\ta\ta\n";
        assert!(matches!(parse_model(text), Err(SegmentError::MalformedLine { line: 3, .. })));
        let text = "SEGBIAS 1 morfessor\nCAP\t3\n";
        assert!(matches!(parse_model(text), Err(SegmentError::MalformedLine { line: 2, .. })));
    }

    #[test]
    fn round_trip_char() {
        let text = "SEGBIAS 1 char\nSYM\ta\nSYM\té\n";
        let m = parse_model(text).unwrap();
        assert_eq!(serialize_model(&m), text);
    }

    #[test]
    fn unigram_logprob_precision() {
        let m = SegmentationModel::unigram(
            UnigramModel::new([("a", (1.0f64 / 3.0).ln()), ("b", (2.0f64 / 3.0).ln())]).unwrap(),
        );
        let text = serialize_model(&m);
        let field = text.lines().find(|l| l.starts_with("PIECE\tb\t")).unwrap().rsplit('\t').next().unwrap();
        let mantissa = field.trim_start_matches('-').split('e').next().unwrap().replace('.', "");
        assert_eq!(mantissa.len(), 17, "{field}");
        assert_eq!(field.parse::<f64>().unwrap().to_bits(), (2.0f64 / 3.0).ln().to_bits());
        let back = parse_model(&text).unwrap();
        assert_eq!(back, m);
        assert_eq!(serialize_model(&back), text);
    }
}
