use std::sync::OnceLock;

use regex::RegexSet;

use crate::error::{Error, Result};

// Vowel-group count, then pattern corrections: each matching pattern moves
// the count by one.
const SUBTRACT: &[&str] = &[
    "cial",
    "tia",
    "cius",
    "cious",
    "giu",
    "ion",
    "sia$",
    "[aeiouy][^aeiouy]+ely$",
    "[^tdaeiouy]ed$",
    "[^aeiouysxzhgc]es$",
    "ically$",
    // silent e before a consonant-initial suffix or second compound member
    "[aiou][^aeiouy]e(ments?|ful|less|ness|ly)",
    "[aeiou][^aeiouy]e(names?|thing|time|where|fore|zone|work|line|space|stamp)",
];

const ADD: &[&str] = &[
    "ia",
    "riet",
    "dien",
    "iu",
    "io($|[^r])",
    "[aeiouym]bl$",
    "^mc",
    "ism$",
    "[^l]lien",
    "^coa[dglx].",
    "[^gq]ua[^auieo]",
    "dnt$",
    "[^aeiouy]les?$",
    "[^aeiouyl]led$",
    "crea[^s]",
    "[aeiouy]ing$",
    "ire[sd]?$",
    "(^|h)ours?$",
    "[^aeiouy]ier",
    "thms?$",
    "[aeiou]y[aeiou]",
];

fn sets() -> &'static (RegexSet, RegexSet) {
    static SETS: OnceLock<(RegexSet, RegexSet)> = OnceLock::new();
    SETS.get_or_init(|| (RegexSet::new(SUBTRACT).unwrap(), RegexSet::new(ADD).unwrap()))
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y')
}

/// Doubled consonant followed by a final "l" ("-ll" words such as "squall").
fn doubled_l_ending(w: &[char]) -> bool {
    let n = w.len();
    n >= 3 && w[n - 1] == 'l' && w[n - 2] == w[n - 3] && !is_vowel(w[n - 2])
}

/// Syllable estimate for an alphabetic word; never below 1.
pub fn count_syllables(word: &str) -> Result<usize> {
    if word.is_empty() || !word.chars().all(char::is_alphabetic) {
        return Err(Error::Argument(format!("count_syllables needs an alphabetic word, got {word:?}")));
    }
    let w = word.to_lowercase();
    let chars: Vec<char> = w.chars().collect();
    if !chars.iter().any(|&c| is_vowel(c)) {
        // spelled-out acronym
        return Ok(chars.len());
    }
    let mut core = w.replace("qu", "q");
    if core.ends_with('e') && core.chars().count() > 2 {
        core.pop();
    }
    let mut groups = 0i64;
    let mut in_group = false;
    for c in core.chars() {
        let v = is_vowel(c);
        if v && !in_group {
            groups += 1;
        }
        in_group = v;
    }
    let (sub, add) = sets();
    groups -= sub.matches(&w).iter().count() as i64;
    groups += add.matches(&w).iter().count() as i64;
    if doubled_l_ending(&chars) {
        groups += 1;
    }
    Ok(groups.max(1) as usize)
}

/// Syllables of an arbitrary token: alphabetic runs are counted and summed;
/// a token with no letters counts as one. Apostrophes are dropped first and
/// vowelless clitic remnants ("n't") add nothing beyond the floor of one.
pub fn token_syllables(token: &str) -> usize {
    let clitic = token.contains(['\'', '\u{2019}']);
    let cleaned: String = token.chars().filter(|&c| c != '\'' && c != '\u{2019}').collect();
    let total: usize = cleaned
        .split(|c: char| !c.is_alphabetic())
        .filter(|p| !p.is_empty())
        .filter(|p| !clitic || p.chars().any(|c| is_vowel(c.to_ascii_lowercase())))
        .map(|p| count_syllables(p).unwrap_or(1))
        .sum();
    total.max(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(count_syllables("cat").unwrap(), 1);
        assert_eq!(count_syllables("generated").unwrap(), 4);
        assert_eq!(count_syllables("make").unwrap(), 1);
        assert_eq!(count_syllables("the").unwrap(), 1);
        assert_eq!(count_syllables("every").unwrap(), 3);
        assert_eq!(count_syllables("table").unwrap(), 2);
    }

    #[test]
    fn rejects_non_alphabetic() {
        assert!(matches!(count_syllables("abc1"), Err(Error::Argument(_))));
        assert!(matches!(count_syllables(""), Err(Error::Argument(_))));
        assert!(count_syllables("it's").is_err());
    }

    #[test]
    fn token_level() {
        assert_eq!(token_syllables("well-known"), 2);
        assert_eq!(token_syllables("1990"), 1);
        assert_eq!(token_syllables("don't"), 1);
        assert_eq!(token_syllables("n't"), 1);
    }
}
