//! English suffix-stripping stemmer (Porter, 1980).
//!
//! Words are split into consonant/vowel runs, `[C](VC)^m[V]`, where `m` is
//! the *measure* of a stem. `y` is a vowel when it follows a consonant.
//! Conditions: `*v*` stem contains a vowel, `*d` stem ends in a double
//! consonant, `*o` stem ends consonant-vowel-consonant with the final
//! consonant not `w`, `x` or `y`.
//!
//! | step | rules |
//! |------|-------|
//! | 1a | `sses`→`ss`, `ies`→`i`, `ss`→`ss`, `s`→`` |
//! | 1b | (m>0) `eed`→`ee`; (*v*) `ed`→``; (*v*) `ing`→``; after the last two: `at`→`ate`, `bl`→`ble`, `iz`→`ize`, else (*d, not `l`/`s`/`z`) drop final letter, else (m=1 and *o) add `e` |
//! | 1c | (*v*) `y`→`i` |
//! | 2 | (m>0) `ational`→`ate`, `tional`→`tion`, `enci`→`ence`, `anci`→`ance`, `izer`→`ize`, `abli`→`able`, `alli`→`al`, `entli`→`ent`, `eli`→`e`, `ousli`→`ous`, `ization`→`ize`, `ation`→`ate`, `ator`→`ate`, `alism`→`al`, `iveness`→`ive`, `fulness`→`ful`, `ousness`→`ous`, `aliti`→`al`, `iviti`→`ive`, `biliti`→`ble` |
//! | 3 | (m>0) `icate`→`ic`, `ative`→``, `alize`→`al`, `iciti`→`ic`, `ical`→`ic`, `ful`→``, `ness`→`` |
//! | 4 | (m>1) drop `al`, `ance`, `ence`, `er`, `ic`, `able`, `ible`, `ant`, `ement`, `ment`, `ent`, `ion` (stem ends `s`/`t`), `ou`, `ism`, `ate`, `iti`, `ous`, `ive`, `ize` |
//! | 5a | (m>1) `e`→``; (m=1 and not *o) `e`→`` |
//! | 5b | (m>1, *d, ends `l`) drop final letter |
//!
//! In steps 2 to 4 only the longest matching suffix is considered; if its
//! condition fails the word is left unchanged by that step.
//!
//! Words of length ≤ 2 and words containing anything but ASCII lowercase
//! letters are returned unchanged. The full pass is repeated until the
//! output stops changing, so `stem(stem(w)) == stem(w)` for every input.

const STEP2: &[(&str, &str)] = &[
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

const STEP3: &[(&str, &str)] = &[
    ("icate", "ic"),
    ("ative", ""),
    ("alize", "al"),
    ("iciti", "ic"),
    ("ical", "ic"),
    ("ful", ""),
    ("ness", ""),
];

const STEP4: &[&str] = &[
    "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement", "ment", "ent", "ion", "ou",
    "ism", "ate", "iti", "ous", "ive", "ize",
];

pub fn stem(token: &str) -> String {
    if token.len() <= 2 || !token.bytes().all(|b| b.is_ascii_lowercase()) {
        return token.to_owned();
    }
    let mut word = token.as_bytes().to_vec();
    // Every change either shortens the word or rewrites `y`→`i` / `li`→`le`
    // in place, so this terminates quickly.
    loop {
        let next = stem_once(&word);
        if next == word {
            break;
        }
        word = next;
    }
    String::from_utf8(word).expect("ascii in, ascii out")
}

fn stem_once(word: &[u8]) -> Vec<u8> {
    let mut w = word.to_vec();
    if w.len() <= 2 {
        return w;
    }
    step1a(&mut w);
    step1b(&mut w);
    step1c(&mut w);
    replace_longest(&mut w, STEP2, |stem| measure(stem) > 0);
    replace_longest(&mut w, STEP3, |stem| measure(stem) > 0);
    step4(&mut w);
    step5(&mut w);
    w
}

fn is_consonant(w: &[u8], i: usize) -> bool {
    match w[i] {
        b'a' | b'e' | b'i' | b'o' | b'u' => false,
        b'y' => i == 0 || !is_consonant(w, i - 1),
        _ => true,
    }
}

/// Number of VC sequences in `w`.
fn measure(w: &[u8]) -> usize {
    let mut m = 0;
    let mut i = 0;
    let n = w.len();
    while i < n && is_consonant(w, i) {
        i += 1;
    }
    loop {
        while i < n && !is_consonant(w, i) {
            i += 1;
        }
        if i >= n {
            return m;
        }
        while i < n && is_consonant(w, i) {
            i += 1;
        }
        m += 1;
        if i >= n {
            return m;
        }
    }
}

fn has_vowel(w: &[u8]) -> bool {
    (0..w.len()).any(|i| !is_consonant(w, i))
}

fn ends_double_consonant(w: &[u8]) -> bool {
    let n = w.len();
    n >= 2 && w[n - 1] == w[n - 2] && is_consonant(w, n - 1)
}

fn ends_cvc(w: &[u8]) -> bool {
    let n = w.len();
    n >= 3
        && is_consonant(w, n - 3)
        && !is_consonant(w, n - 2)
        && is_consonant(w, n - 1)
        && !matches!(w[n - 1], b'w' | b'x' | b'y')
}

fn stem_before<'a>(w: &'a [u8], suffix: &str) -> Option<&'a [u8]> {
    w.strip_suffix(suffix.as_bytes())
}

fn set_suffix(w: &mut Vec<u8>, old: &str, new: &str) {
    w.truncate(w.len() - old.len());
    w.extend_from_slice(new.as_bytes());
}

fn step1a(w: &mut Vec<u8>) {
    if w.ends_with(b"sses") || w.ends_with(b"ies") {
        w.truncate(w.len() - 2);
    } else if w.ends_with(b"ss") {
    } else if w.ends_with(b"s") {
        w.pop();
    }
}

fn step1b(w: &mut Vec<u8>) {
    if let Some(stem) = stem_before(w, "eed") {
        if measure(stem) > 0 {
            w.pop();
        }
        return;
    }
    let removed = ["ed", "ing"].iter().find_map(|suffix| {
        stem_before(w, suffix)
            .filter(|stem| has_vowel(stem))
            .map(|stem| stem.len())
    });
    let Some(len) = removed else { return };
    w.truncate(len);
    if w.ends_with(b"at") || w.ends_with(b"bl") || w.ends_with(b"iz") {
        w.push(b'e');
    } else if ends_double_consonant(w) && !matches!(w[w.len() - 1], b'l' | b's' | b'z') {
        w.pop();
    } else if measure(w) == 1 && ends_cvc(w) {
        w.push(b'e');
    }
}

fn step1c(w: &mut [u8]) {
    let n = w.len();
    if w[n - 1] == b'y' && has_vowel(&w[..n - 1]) {
        w[n - 1] = b'i';
    }
}

fn replace_longest(w: &mut Vec<u8>, rules: &[(&str, &str)], cond: impl Fn(&[u8]) -> bool) {
    let best = rules
        .iter()
        .filter(|(old, _)| w.ends_with(old.as_bytes()))
        .max_by_key(|(old, _)| old.len());
    if let Some((old, new)) = best {
        if cond(&w[..w.len() - old.len()]) {
            set_suffix(w, old, new);
        }
    }
}

fn step4(w: &mut Vec<u8>) {
    let Some(suffix) = STEP4
        .iter()
        .filter(|s| w.ends_with(s.as_bytes()))
        .max_by_key(|s| s.len())
    else {
        return;
    };
    let stem = &w[..w.len() - suffix.len()];
    let ok = measure(stem) > 1
        && (*suffix != "ion" || matches!(stem.last(), Some(b's') | Some(b't')));
    if ok {
        w.truncate(stem.len());
    }
}

fn step5(w: &mut Vec<u8>) {
    if let Some(stem) = stem_before(w, "e") {
        let m = measure(stem);
        if m > 1 || (m == 1 && !ends_cvc(stem)) {
            w.pop();
        }
    }
    if w.ends_with(b"ll") && measure(w) > 1 {
        w.pop();
    }
}
