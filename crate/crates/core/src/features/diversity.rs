use std::collections::HashMap;
use std::hash::Hash;

pub const MATTR_WINDOW: usize = 100;

/// Moving-average type-token ratio. With fewer items than `window` this is
/// the plain TTR; `None` for empty input.
pub fn mattr<T: Eq + Hash>(items: &[T], window: usize) -> Option<f64> {
    assert!(window >= 1, "window must be positive");
    let n = items.len();
    if n == 0 {
        return None;
    }
    if n < window {
        let mut seen: HashMap<&T, ()> = HashMap::new();
        for t in items {
            seen.insert(t, ());
        }
        return Some(seen.len() as f64 / n as f64);
    }
    let mut counts: HashMap<&T, usize> = HashMap::new();
    for t in &items[..window] {
        *counts.entry(t).or_default() += 1;
    }
    let mut total = counts.len() as f64;
    for i in window..n {
        let out = &items[i - window];
        let c = counts.get_mut(out).unwrap();
        *c -= 1;
        if *c == 0 {
            counts.remove(out);
        }
        *counts.entry(&items[i]).or_default() += 1;
        total += counts.len() as f64;
    }
    let windows = (n - window + 1) as f64;
    Some(total / windows / window as f64)
}

/// Number of types occurring exactly once.
pub fn hapax_count<T: Eq + Hash>(items: &[T]) -> usize {
    let mut counts: HashMap<&T, usize> = HashMap::new();
    for t in items {
        *counts.entry(t).or_default() += 1;
    }
    counts.values().filter(|&&c| c == 1).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_enumerated_windows() {
        let t = ["a", "b", "a", "c"];
        assert_eq!(mattr(&t, 2), Some(1.0));
        assert!((mattr(&t, 3).unwrap() - 5.0 / 6.0).abs() < 1e-15);
        assert_eq!(mattr(&t, 10), Some(0.75));
    }

    #[test]
    fn degenerate_vocabularies() {
        assert_eq!(mattr(&["x"; 7], 3), Some(1.0 / 3.0));
        assert_eq!(mattr(&["x"; 2], 3), Some(0.5));
        assert_eq!(mattr(&[1, 2, 3, 4, 5], 2), Some(1.0));
        assert_eq!(mattr::<&str>(&[], 5), None);
    }

    #[test]
    fn hapax() {
        assert_eq!(hapax_count(&["a", "b", "a", "c"]), 2);
    }
}
