//! Suffix-stripping lemmatizer: a short irregular table plus inflection rules
//! chosen by coarse tag.

use super::tags::Coarse;

fn irregular(lower: &str) -> Option<&'static str> {
    Some(match lower {
        "am" | "is" | "are" | "was" | "were" | "been" | "being" | "'m" | "'re" => "be",
        "has" | "had" | "having" | "'ve" => "have",
        "does" | "did" | "done" | "doing" => "do",
        "went" | "gone" => "go",
        "made" => "make",
        "said" => "say",
        "got" | "gotten" => "get",
        "took" | "taken" => "take",
        "came" => "come",
        "saw" | "seen" => "see",
        "knew" | "known" => "know",
        "thought" => "think",
        "gave" | "given" => "give",
        "found" => "find",
        "told" => "tell",
        "wrote" | "written" => "write",
        "better" | "best" => "good",
        "worse" | "worst" => "bad",
        "children" => "child",
        "men" => "man",
        "women" => "woman",
        "people" => "person",
        "mice" => "mouse",
        "feet" => "foot",
        "teeth" => "tooth",
        "n't" => "not",
        "'ll" => "will",
        _ => return None,
    })
}

fn is_vowel(c: u8) -> bool {
    matches!(c, b'a' | b'e' | b'i' | b'o' | b'u')
}

fn undouble(stem: &str) -> String {
    let b = stem.as_bytes();
    let n = b.len();
    if n >= 3 && b[n - 1] == b[n - 2] && !is_vowel(b[n - 1]) && !matches!(b[n - 1], b'l' | b's' | b'z') {
        stem[..n - 1].to_string()
    } else {
        stem.to_string()
    }
}

fn noun_lemma(w: &str) -> String {
    if w.len() > 4 && w.ends_with("ies") {
        format!("{}y", &w[..w.len() - 3])
    } else if w.len() > 3 && (w.ends_with("ches") || w.ends_with("shes") || w.ends_with("sses") || w.ends_with("xes")) {
        w[..w.len() - 2].to_string()
    } else if w.len() > 3 && w.ends_with('s') && !w.ends_with("ss") && !w.ends_with("us") && !w.ends_with("is") {
        w[..w.len() - 1].to_string()
    } else {
        w.to_string()
    }
}

fn verb_lemma(w: &str) -> String {
    if w.len() > 5 && w.ends_with("ing") {
        undouble(&w[..w.len() - 3])
    } else if w.len() > 4 && w.ends_with("ied") {
        format!("{}y", &w[..w.len() - 3])
    } else if w.len() > 4 && w.ends_with("ed") {
        undouble(&w[..w.len() - 2])
    } else {
        noun_lemma(w)
    }
}

fn degree_lemma(w: &str) -> String {
    if w.len() > 5 && w.ends_with("iest") {
        format!("{}y", &w[..w.len() - 4])
    } else if w.len() > 4 && w.ends_with("ier") {
        format!("{}y", &w[..w.len() - 3])
    } else if w.len() > 5 && w.ends_with("est") {
        undouble(&w[..w.len() - 3])
    } else if w.len() > 4 && w.ends_with("er") {
        undouble(&w[..w.len() - 2])
    } else {
        w.to_string()
    }
}

/// Lemma of a lowercased token given its coarse tag.
pub fn lemmatize(lower: &str, coarse: Coarse, graded: bool) -> String {
    if let Some(l) = irregular(lower) {
        return l.to_string();
    }
    if !lower.is_ascii() {
        return lower.to_string();
    }
    match coarse {
        Coarse::Noun => noun_lemma(lower),
        Coarse::Verb | Coarse::Aux => verb_lemma(lower),
        Coarse::Adj | Coarse::Adv if graded => degree_lemma(lower),
        _ => lower.to_string(),
    }
}
