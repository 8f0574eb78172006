//! CoNLL-U ingestion and emission.

use std::fmt::Write as _;
use std::io::BufRead;
use std::path::Path;

use super::tags::{Coarse, Degree, PosTag, PronounClass, VerbForm};
use super::tokenize::Token;
use super::AnnotatedText;
use crate::error::{Error, Result};

fn upos_out(tag: &PosTag, xpos: &str) -> &'static str {
    match tag.coarse {
        Coarse::Conj if xpos == "CC" => "CCONJ",
        Coarse::Conj => "SCONJ",
        c => c.as_str(),
    }
}

fn feats_out(tag: &PosTag) -> String {
    let mut f: Vec<&str> = Vec::new();
    match tag.degree {
        Some(Degree::Comparative) => f.push("Degree=Cmp"),
        Some(Degree::Superlative) => f.push("Degree=Sup"),
        _ => {}
    }
    if tag.possessive {
        f.push("Poss=Yes");
    }
    match tag.verb_form {
        Some(VerbForm::Vbg) => f.push("VerbForm=Ger"),
        Some(VerbForm::Vbn) => f.push("VerbForm=Part"),
        Some(VerbForm::Vb) => f.push("VerbForm=Inf"),
        Some(_) => f.push("VerbForm=Fin"),
        None => {}
    }
    if f.is_empty() {
        "_".into()
    } else {
        f.join("|")
    }
}

/// Serialize an annotation as CoNLL-U; tokens without a following space get
/// `SpaceAfter=No`.
pub fn emit_conllu(text: &AnnotatedText) -> String {
    let mut out = String::new();
    for (n, sent) in text.sentences.iter().enumerate() {
        let _ = writeln!(out, "# sent_id = {}", n + 1);
        for (k, i) in sent.clone().enumerate() {
            let tok = &text.tokens[i];
            let tag = &text.tags[i];
            let xpos = if text.xpos[i].is_empty() { "_" } else { text.xpos[i].as_str() };
            let glued = text.tokens.get(i + 1).is_some_and(|next| next.span.0 == tok.span.1) && i + 1 < sent.end;
            let misc = if glued { "SpaceAfter=No" } else { "_" };
            let lemma = super::lemmatize(&tok.lower, tag.coarse, tag.degree.is_some_and(|d| d != Degree::Positive));
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t_\t_\t_\t{}",
                k + 1,
                tok.surface,
                lemma,
                upos_out(tag, xpos),
                xpos,
                feats_out(tag),
                misc
            );
        }
        out.push('\n');
    }
    out
}

pub fn write_conllu(text: &AnnotatedText, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, emit_conllu(text)).map_err(|e| Error::io(path, e))
}

pub fn ingest_conllu(path: impl AsRef<Path>) -> Result<AnnotatedText> {
    let path = path.as_ref();
    let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_conllu(std::io::BufReader::new(f))
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn tag_from_columns(upos: Coarse, xpos: &str, feats: &str, lower: &str) -> PosTag {
    let penn = PosTag::from_penn(xpos, lower, false);
    let has = |f: &str| feats.split('|').any(|x| x == f);
    let mut tag = PosTag::new(upos);
    if let Some(vf) = penn.verb_form {
        tag = tag.with_verb_form(vf);
    } else if upos.is_verbal() {
        let vf = if has("VerbForm=Ger") {
            VerbForm::Vbg
        } else if has("VerbForm=Part") {
            VerbForm::Vbn
        } else if has("VerbForm=Inf") {
            VerbForm::Vb
        } else {
            VerbForm::Vbp
        };
        tag = tag.with_verb_form(vf);
    }
    let degree = if has("Degree=Cmp") {
        Degree::Comparative
    } else if has("Degree=Sup") {
        Degree::Superlative
    } else {
        penn.degree.unwrap_or(Degree::Positive)
    };
    tag.with_degree(degree)
        .with_possessive(has("Poss=Yes") || penn.possessive)
        .with_pronoun(PronounClass::of(lower))
}

/// Parse CoNLL-U text. Multiword-token and empty-node lines are skipped.
/// Consecutive sentences are joined with a newline in the synthetic text
/// that token spans refer to.
pub fn parse_conllu(reader: impl BufRead) -> Result<AnnotatedText> {
    let mut tokens: Vec<Token> = Vec::new();
    let mut xpos: Vec<String> = Vec::new();
    let mut tags: Vec<PosTag> = Vec::new();
    let mut sentences = Vec::new();
    let mut start = 0usize;
    let mut offset = 0usize;
    let mut space_after = true;
    let mut close = |tokens: &Vec<Token>, start: &mut usize, offset: &mut usize| {
        if tokens.len() > *start {
            sentences.push(*start..tokens.len());
            *start = tokens.len();
            *offset += 1;
        }
    };
    for (n, line) in reader.lines().enumerate() {
        let lineno = n + 1;
        let line = line.map_err(|e| parse_err(lineno, e.to_string()))?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            close(&tokens, &mut start, &mut offset);
            space_after = true;
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(parse_err(lineno, format!("expected 10 tab-separated columns, found {}", cols.len())));
        }
        let id = cols[0];
        if id.contains('-') || id.contains('.') {
            continue;
        }
        if id.parse::<usize>().map_or(true, |v| v == 0) {
            return Err(parse_err(lineno, format!("bad token id {id:?}")));
        }
        let form = cols[1];
        if form.is_empty() {
            return Err(parse_err(lineno, "empty FORM"));
        }
        let upos_col = cols[3];
        if upos_col.is_empty() || upos_col == "_" {
            return Err(parse_err(lineno, "missing UPOS"));
        }
        let upos: Coarse = upos_col
            .parse()
            .map_err(|_| parse_err(lineno, format!("unknown UPOS {upos_col:?}")))?;
        let xp = if cols[4] == "_" { String::new() } else { cols[4].to_string() };
        if tokens.len() > start && space_after {
            offset += 1;
        }
        let tok = Token::detached(form, offset);
        offset = tok.span.1;
        space_after = !cols[9].split('|').any(|m| m == "SpaceAfter=No");
        tags.push(tag_from_columns(upos, &xp, cols[5], &tok.lower));
        xpos.push(xp);
        tokens.push(tok);
    }
    close(&tokens, &mut start, &mut offset);
    Ok(AnnotatedText::from_parts(tokens, xpos, tags, sentences))
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "# text = We report results.\n\
        1\tWe\twe\tPRON\tPRP\t_\t_\t_\t_\t_\n\
        2\treport\treport\tVERB\tVBP\t_\t_\t_\t_\t_\n\
        3\tresults\tresult\tNOUN\tNNS\t_\t_\t_\t_\tSpaceAfter=No\n\
        4\t.\t.\tPUNCT\t.\t_\t_\t_\t_\t_\n\n";

    #[test]
    fn minimal_sentence() {
        let a = parse_conllu(MINIMAL.as_bytes()).unwrap();
        let coarse: Vec<Coarse> = a.tags.iter().map(|t| t.coarse).collect();
        assert_eq!(coarse, [Coarse::Pron, Coarse::Verb, Coarse::Noun, Coarse::Punct]);
        assert_eq!(a.tags[0].pronoun, Some(PronounClass::FirstPlural));
        assert_eq!(a.sentences, vec![0..4]);
        assert_eq!(a.verb_groups.len(), 1);
        assert_eq!(a.tokens[3].span.0, a.tokens[2].span.1);
    }

    #[test]
    fn missing_upos_is_parse_error_with_line() {
        let bad = "1\tWe\twe\tPRON\tPRP\t_\t_\t_\t_\t_\n2\tgo\tgo\t_\tVBP\t_\t_\t_\t_\t_\n";
        match parse_conllu(bad.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        let short = "1\tWe\twe\tPRP\t_\t_\t_\t_\t_\n";
        assert!(matches!(parse_conllu(short.as_bytes()), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn emit_then_ingest() {
        let a = parse_conllu(MINIMAL.as_bytes()).unwrap();
        let b = parse_conllu(emit_conllu(&a).as_bytes()).unwrap();
        assert_eq!(a, b);
    }
}
