//! Porter stemmer (the original 1980 algorithm) for the METEOR stem stage.
//!
//! Operates on lowercase ASCII words; tokens containing anything else are
//! passed through unchanged by [`stem_key`]. Words of length <= 2 are
//! returned as-is, matching the reference C implementation.

use alloc::string::String;
use alloc::vec::Vec;

/// Normalization used by the METEOR stem stage: lowercase, then Porter-stem
/// pure-ASCII-alphabetic tokens. Two tokens match at the stem stage when
/// their keys are equal.
pub fn stem_key(surface: &str) -> String {
    let lower = surface.to_lowercase();
    if lower.bytes().all(|b| b.is_ascii_lowercase()) {
        porter_stem(&lower)
    } else {
        lower
    }
}

/// Stems a lowercase ASCII word.
pub fn porter_stem(word: &str) -> String {
    debug_assert!(word.bytes().all(|b| b.is_ascii_lowercase()));
    if word.len() <= 2 {
        return String::from(word);
    }
    let mut b: Vec<u8> = word.as_bytes().to_vec();
    step_1a(&mut b);
    step_1b(&mut b);
    step_1c(&mut b);
    step_2(&mut b);
    step_3(&mut b);
    step_4(&mut b);
    step_5(&mut b);
    String::from_utf8(b).expect("ascii")
}

fn is_consonant(b: &[u8], i: usize) -> bool {
    match b[i] {
        b'a' | b'e' | b'i' | b'o' | b'u' => false,
        b'y' => i == 0 || !is_consonant(b, i - 1),
        _ => true,
    }
}

/// Porter's measure: the m in `[C](VC)^m[V]`.
fn measure(b: &[u8]) -> usize {
    let n = b.len();
    let mut m = 0;
    let mut i = 0;
    while i < n && is_consonant(b, i) {
        i += 1;
    }
    loop {
        while i < n && !is_consonant(b, i) {
            i += 1;
        }
        if i == n {
            return m;
        }
        m += 1;
        while i < n && is_consonant(b, i) {
            i += 1;
        }
        if i == n {
            return m;
        }
    }
}

fn has_vowel(b: &[u8]) -> bool {
    (0..b.len()).any(|i| !is_consonant(b, i))
}

fn ends_double_consonant(b: &[u8]) -> bool {
    let n = b.len();
    n >= 2 && b[n - 1] == b[n - 2] && is_consonant(b, n - 1)
}

/// `*o`: stem ends consonant-vowel-consonant where the final consonant is
/// not w, x, or y.
fn ends_cvc(b: &[u8]) -> bool {
    let n = b.len();
    n >= 3
        && is_consonant(b, n - 3)
        && !is_consonant(b, n - 2)
        && is_consonant(b, n - 1)
        && !matches!(b[n - 1], b'w' | b'x' | b'y')
}

fn ends_with<'a>(b: &'a [u8], suffix: &str) -> Option<&'a [u8]> {
    b.strip_suffix(suffix.as_bytes())
}

fn replace_suffix(b: &mut Vec<u8>, suffix: &str, replacement: &str) {
    let stem_len = b.len() - suffix.len();
    b.truncate(stem_len);
    b.extend_from_slice(replacement.as_bytes());
}

fn step_1a(b: &mut Vec<u8>) {
    if ends_with(b, "sses").is_some() {
        replace_suffix(b, "sses", "ss");
    } else if ends_with(b, "ies").is_some() {
        replace_suffix(b, "ies", "i");
    } else if ends_with(b, "ss").is_some() {
        // keep
    } else if ends_with(b, "s").is_some() {
        replace_suffix(b, "s", "");
    }
}

fn step_1b(b: &mut Vec<u8>) {
    if let Some(stem) = ends_with(b, "eed") {
        if measure(stem) > 0 {
            replace_suffix(b, "eed", "ee");
        }
        return;
    }
    let stripped = if let Some(stem) = ends_with(b, "ed") {
        if !has_vowel(stem) {
            return;
        }
        replace_suffix(b, "ed", "");
        true
    } else if let Some(stem) = ends_with(b, "ing") {
        if !has_vowel(stem) {
            return;
        }
        replace_suffix(b, "ing", "");
        true
    } else {
        false
    };
    if !stripped {
        return;
    }
    if ends_with(b, "at").is_some() || ends_with(b, "bl").is_some() || ends_with(b, "iz").is_some()
    {
        b.push(b'e');
    } else if ends_double_consonant(b) && !matches!(b[b.len() - 1], b'l' | b's' | b'z') {
        b.pop();
    } else if measure(b) == 1 && ends_cvc(b) {
        b.push(b'e');
    }
}

fn step_1c(b: &mut [u8]) {
    if let Some(stem) = ends_with(b, "y") {
        if has_vowel(stem) {
            let n = b.len();
            b[n - 1] = b'i';
        }
    }
}

/// Applies the longest matching rule of `rules` if the stem before the
/// suffix satisfies `measure > threshold`.
fn apply_table(b: &mut Vec<u8>, rules: &[(&str, &str)], threshold: usize) {
    let best = rules
        .iter()
        .filter(|(suffix, _)| b.len() > suffix.len() && ends_with(b, suffix).is_some())
        .max_by_key(|(suffix, _)| suffix.len());
    if let Some(&(suffix, replacement)) = best {
        let stem = &b[..b.len() - suffix.len()];
        if measure(stem) > threshold {
            replace_suffix(b, suffix, replacement);
        }
    }
}

fn step_2(b: &mut Vec<u8>) {
    const RULES: &[(&str, &str)] = &[
        ("ational", "ate"),
        ("tional", "tion"),
        ("enci", "ence"),
        ("anci", "ance"),
        ("izer", "ize"),
        ("abli", "able"),
        ("alli", "al"),
        ("entli", "ent"),
        ("eli", "e"),
        ("ousli", "ous"),
        ("ization", "ize"),
        ("ation", "ate"),
        ("ator", "ate"),
        ("alism", "al"),
        ("iveness", "ive"),
        ("fulness", "ful"),
        ("ousness", "ous"),
        ("aliti", "al"),
        ("iviti", "ive"),
        ("biliti", "ble"),
    ];
    apply_table(b, RULES, 0);
}

fn step_3(b: &mut Vec<u8>) {
    const RULES: &[(&str, &str)] = &[
        ("icate", "ic"),
        ("ative", ""),
        ("alize", "al"),
        ("iciti", "ic"),
        ("ical", "ic"),
        ("ful", ""),
        ("ness", ""),
    ];
    apply_table(b, RULES, 0);
}

fn step_4(b: &mut Vec<u8>) {
    const SUFFIXES: &[&str] = &[
        "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement", "ment", "ent", "ion",
        "ou", "ism", "ate", "iti", "ous", "ive", "ize",
    ];
    let best = SUFFIXES
        .iter()
        .filter(|suffix| b.len() > suffix.len() && ends_with(b, suffix).is_some())
        .max_by_key(|suffix| suffix.len());
    if let Some(&suffix) = best {
        let stem = &b[..b.len() - suffix.len()];
        let ok = if suffix == "ion" {
            measure(stem) > 1 && matches!(stem.last(), Some(b's') | Some(b't'))
        } else {
            measure(stem) > 1
        };
        if ok {
            replace_suffix(b, suffix, "");
        }
    }
}

fn step_5(b: &mut Vec<u8>) {
    if let Some(stem) = ends_with(b, "e") {
        let m = measure(stem);
        if m > 1 || (m == 1 && !ends_cvc(stem)) {
            b.pop();
        }
    }
    if measure(b) > 1 && ends_double_consonant(b) && b[b.len() - 1] == b'l' {
        b.pop();
    }
}
