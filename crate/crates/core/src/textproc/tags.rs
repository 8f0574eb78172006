use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coarse part-of-speech classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Coarse {
    Noun,
    Propn,
    Verb,
    Aux,
    Adj,
    Adv,
    Pron,
    Det,
    Adp,
    Conj,
    Part,
    Num,
    Intj,
    Punct,
    X,
}

impl Coarse {
    pub fn as_str(self) -> &'static str {
        match self {
            Coarse::Noun => "NOUN",
            Coarse::Propn => "PROPN",
            Coarse::Verb => "VERB",
            Coarse::Aux => "AUX",
            Coarse::Adj => "ADJ",
            Coarse::Adv => "ADV",
            Coarse::Pron => "PRON",
            Coarse::Det => "DET",
            Coarse::Adp => "ADP",
            Coarse::Conj => "CONJ",
            Coarse::Part => "PART",
            Coarse::Num => "NUM",
            Coarse::Intj => "INTJ",
            Coarse::Punct => "PUNCT",
            Coarse::X => "X",
        }
    }

    pub fn is_verbal(self) -> bool {
        matches!(self, Coarse::Verb | Coarse::Aux)
    }
}

impl fmt::Display for Coarse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Coarse {
    type Err = Error;
    /// Accepts the UD set; CCONJ and SCONJ both map to CONJ, SYM to PUNCT.
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "NOUN" => Coarse::Noun,
            "PROPN" => Coarse::Propn,
            "VERB" => Coarse::Verb,
            "AUX" => Coarse::Aux,
            "ADJ" => Coarse::Adj,
            "ADV" => Coarse::Adv,
            "PRON" => Coarse::Pron,
            "DET" => Coarse::Det,
            "ADP" => Coarse::Adp,
            "CONJ" | "CCONJ" | "SCONJ" => Coarse::Conj,
            "PART" => Coarse::Part,
            "NUM" => Coarse::Num,
            "INTJ" => Coarse::Intj,
            "PUNCT" | "SYM" => Coarse::Punct,
            "X" => Coarse::X,
            _ => return Err(Error::Argument(format!("unknown UPOS tag {s:?}"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VerbForm {
    /// Base form.
    Vb,
    /// Past tense.
    Vbd,
    /// Gerund / present participle.
    Vbg,
    /// Past participle.
    Vbn,
    /// Third-person singular present.
    Vbz,
    /// Non-third-person present.
    Vbp,
    /// Modal.
    Md,
}

impl VerbForm {
    pub fn is_finite(self) -> bool {
        matches!(self, VerbForm::Vbd | VerbForm::Vbz | VerbForm::Vbp | VerbForm::Md)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Degree {
    Positive,
    Comparative,
    Superlative,
}

/// Person/number class of a personal pronoun.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PronounClass {
    FirstSingular,
    FirstPlural,
    Second,
    ThirdSingular,
    ThirdPlural,
}

impl PronounClass {
    pub fn of(lower: &str) -> Option<PronounClass> {
        use PronounClass::*;
        Some(match lower {
            "i" | "me" | "my" | "mine" | "myself" => FirstSingular,
            "we" | "us" | "our" | "ours" | "ourselves" => FirstPlural,
            "you" | "your" | "yours" | "yourself" | "yourselves" => Second,
            "he" | "him" | "his" | "she" | "her" | "hers" | "it" | "its" | "himself" | "herself" | "itself" => {
                ThirdSingular
            }
            "they" | "them" | "their" | "theirs" | "themselves" => ThirdPlural,
            _ => return None,
        })
    }
}

/// Coarse tag plus fine flags. Constructed through [`PosTag::new`] and the
/// `with_*` builders, which keep the flags consistent with the coarse tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PosTag {
    pub coarse: Coarse,
    pub verb_form: Option<VerbForm>,
    pub degree: Option<Degree>,
    pub possessive: bool,
    pub pronoun: Option<PronounClass>,
}

impl PosTag {
    pub fn new(coarse: Coarse) -> PosTag {
        PosTag {
            coarse,
            verb_form: None,
            degree: None,
            possessive: false,
            pronoun: None,
        }
    }

    pub fn with_verb_form(mut self, f: VerbForm) -> PosTag {
        if self.coarse.is_verbal() {
            self.verb_form = Some(f);
        }
        self
    }

    pub fn with_degree(mut self, d: Degree) -> PosTag {
        if matches!(self.coarse, Coarse::Adj | Coarse::Adv) {
            self.degree = Some(d);
        }
        self
    }

    pub fn with_possessive(mut self, p: bool) -> PosTag {
        self.possessive = p;
        self
    }

    pub fn with_pronoun(mut self, p: Option<PronounClass>) -> PosTag {
        if self.coarse == Coarse::Pron {
            self.pronoun = p;
        }
        self
    }

    pub fn is(&self, c: Coarse) -> bool {
        self.coarse == c
    }

    /// Flags are only ever set on compatible coarse tags.
    pub fn is_consistent(&self) -> bool {
        (self.verb_form.is_none() || self.coarse.is_verbal())
            && (self.degree.is_none() || matches!(self.coarse, Coarse::Adj | Coarse::Adv))
            && (self.pronoun.is_none() || self.coarse == Coarse::Pron)
    }

    /// Map a Penn Treebank tag. `have`/`do` become AUX only when
    /// `before_verb` says a verb follows.
    pub fn from_penn(xpos: &str, lower: &str, before_verb: bool) -> PosTag {
        use Coarse::*;
        let is_punct_form = !lower.chars().any(char::is_alphanumeric);
        if is_punct_form {
            return PosTag::new(Punct);
        }
        let verb_form = match xpos {
            "VB" => Some(VerbForm::Vb),
            "VBD" => Some(VerbForm::Vbd),
            "VBG" => Some(VerbForm::Vbg),
            "VBN" => Some(VerbForm::Vbn),
            "VBZ" => Some(VerbForm::Vbz),
            "VBP" => Some(VerbForm::Vbp),
            "MD" => Some(VerbForm::Md),
            _ => None,
        };
        if let Some(f) = verb_form {
            let aux = f == VerbForm::Md
                || is_be_form(lower)
                || ((is_have_form(lower) || is_do_form(lower)) && before_verb);
            return PosTag::new(if aux { Aux } else { Verb }).with_verb_form(f);
        }
        let degree = |t: &str| match t {
            "JJR" | "RBR" => Degree::Comparative,
            "JJS" | "RBS" => Degree::Superlative,
            _ => Degree::Positive,
        };
        match xpos {
            "NN" | "NNS" => PosTag::new(Noun),
            "NNP" | "NNPS" => PosTag::new(Propn),
            "JJ" | "JJR" | "JJS" => PosTag::new(Adj).with_degree(degree(xpos)),
            "RB" | "RBR" | "RBS" | "WRB" => PosTag::new(Adv).with_degree(degree(xpos)),
            "PRP" | "WP" | "EX" => PosTag::new(Pron).with_pronoun(PronounClass::of(lower)),
            "PRP$" | "WP$" => PosTag::new(Pron)
                .with_possessive(true)
                .with_pronoun(PronounClass::of(lower)),
            "DT" | "PDT" | "WDT" => PosTag::new(Det),
            "IN" if is_subordinator(lower) => PosTag::new(Conj),
            "IN" => PosTag::new(Adp),
            "CC" => PosTag::new(Conj),
            "RP" | "TO" => PosTag::new(Part),
            "POS" => PosTag::new(Part).with_possessive(true),
            "CD" => PosTag::new(Num),
            "UH" => PosTag::new(Intj),
            "SYM" | "." | "," | ":" | "(" | ")" | "``" | "''" | "#" | "$" => PosTag::new(Punct),
            _ => PosTag::new(X),
        }
    }
}

pub fn is_be_form(lower: &str) -> bool {
    matches!(
        lower,
        "be" | "am" | "is" | "are" | "was" | "were" | "been" | "being" | "'m" | "'re" | "ai"
    ) || lower == "'s"
}

pub fn is_have_form(lower: &str) -> bool {
    matches!(lower, "have" | "has" | "had" | "having" | "'ve" | "'d")
}

pub fn is_do_form(lower: &str) -> bool {
    matches!(lower, "do" | "does" | "did" | "doing")
}

pub fn is_get_form(lower: &str) -> bool {
    matches!(lower, "get" | "gets" | "got" | "gotten" | "getting")
}

pub fn is_subordinator(lower: &str) -> bool {
    matches!(
        lower,
        "because" | "although" | "though" | "unless" | "whereas" | "whether" | "if" | "while" | "that" | "whilst"
    )
}
