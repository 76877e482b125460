//! Words over a k-letter digit alphabet, prefix codes and right-ideal
//! intersection.

use std::borrow::Borrow;
use std::collections::BTreeSet;
use std::fmt;

use num::{BigInt, BigRational, One, Zero};

use crate::error::{Error, Result};

/// A finite word. Letters are stored as raw digits `0..k`.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<u8>) -> Word {
        Word(letters)
    }

    /// Binary word from booleans.
    pub fn from_bits(bits: &[bool]) -> Word {
        Word(bits.iter().map(|&b| b as u8).collect())
    }

    /// The `len`-letter binary word of `v`, most significant letter first.
    pub fn from_u64(v: u64, len: usize) -> Word {
        Word((0..len).map(|i| ((v >> (len - 1 - i)) & 1) as u8).collect())
    }

    /// Inverse of [`Word::from_u64`] for binary words of length ≤ 64.
    pub fn to_u64(&self) -> u64 {
        self.0.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<u8> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn concat(&self, tail: &[u8]) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + tail.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(tail);
        Word(v)
    }

    pub fn child(&self, a: u8) -> Word {
        self.concat(&[a])
    }

    /// Parses `eps` or a digit string, checking letters against `k`.
    pub fn parse(s: &str, k: u8) -> Result<Word> {
        let s = s.trim();
        if s == "eps" || s == "ε" {
            return Ok(Word::empty());
        }
        let mut v = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c.to_digit(10) {
                Some(d) if (d as u8) < k => v.push(d as u8),
                _ => return Err(Error::Parse(format!("bad letter `{c}` in word `{s}` (k={k})"))),
            }
        }
        Ok(Word(v))
    }
}

impl Borrow<[u8]> for Word {
    fn borrow(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("eps");
        }
        for &d in &self.0 {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub fn is_prefix(u: &Word, v: &Word) -> bool {
    u.is_prefix_of(v)
}

/// All words of length `len` over `k` letters, in lexicographic order.
pub fn all_words(k: u8, len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * k as usize);
        for w in &out {
            for a in 0..k {
                next.push(w.child(a));
            }
        }
        out = next;
    }
    out
}

/// All words of length at most `len`.
pub fn words_up_to(k: u8, len: usize) -> Vec<Word> {
    (0..=len).flat_map(|l| all_words(k, l)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CodeClass {
    NotACode,
    Code { maximal: bool },
}

pub fn kraft_sum<'a>(words: impl IntoIterator<Item = &'a Word>, k: u8) -> BigRational {
    let mut s = BigRational::zero();
    for w in words {
        let den = num::pow(BigInt::from(k), w.len());
        s += BigRational::new(BigInt::one(), den);
    }
    s
}

/// Sorted, deduplicated; true iff no member prefixes a different member.
/// In sorted order a word's extensions follow it immediately, so adjacent
/// pairs suffice.
fn sorted_is_antichain(sorted: &[Word]) -> bool {
    sorted.windows(2).all(|p| !p[0].is_prefix_of(&p[1]))
}

pub fn classify_code(set: &[Word], k: u8) -> CodeClass {
    let mut v = set.to_vec();
    v.sort();
    v.dedup();
    if !sorted_is_antichain(&v) {
        return CodeClass::NotACode;
    }
    CodeClass::Code { maximal: kraft_sum(&v, k).is_one() }
}

/// Finite antichain of words under the prefix order, kept sorted.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PrefixCode {
    k: u8,
    words: Vec<Word>,
}

impl PrefixCode {
    pub fn new(k: u8, mut words: Vec<Word>) -> Result<PrefixCode> {
        for w in &words {
            if w.letters().iter().any(|&a| a >= k) {
                return Err(Error::NotACode(format!("{w} uses a letter outside k={k}")));
            }
        }
        words.sort();
        words.dedup();
        if let Some(p) = words.windows(2).find(|p| p[0].is_prefix_of(&p[1])) {
            return Err(Error::NotACode(format!("{} prefixes {}", p[0], p[1])));
        }
        Ok(PrefixCode { k, words })
    }

    /// Caller guarantees sortedness and the antichain property.
    pub(crate) fn from_sorted_unchecked(k: u8, words: Vec<Word>) -> PrefixCode {
        debug_assert!(words.windows(2).all(|p| p[0] < p[1] && !p[0].is_prefix_of(&p[1])));
        PrefixCode { k, words }
    }

    pub fn empty(k: u8) -> PrefixCode {
        PrefixCode { k, words: Vec::new() }
    }

    pub fn uniform(k: u8, len: usize) -> PrefixCode {
        PrefixCode { k, words: all_words(k, len) }
    }

    /// Minimal elements of an arbitrary finite set: the prefix code
    /// generating the same right ideal.
    pub fn minimal(k: u8, set: impl IntoIterator<Item = Word>) -> PrefixCode {
        let mut v: Vec<Word> = set.into_iter().collect();
        v.sort();
        v.dedup();
        let mut out: Vec<Word> = Vec::with_capacity(v.len());
        for w in v {
            if out.last().is_some_and(|u| u.is_prefix_of(&w)) {
                continue;
            }
            out.push(w);
        }
        PrefixCode { k, words: out }
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.binary_search(w).is_ok()
    }

    pub fn max_len(&self) -> usize {
        self.words.iter().map(Word::len).max().unwrap_or(0)
    }

    pub fn kraft(&self) -> BigRational {
        kraft_sum(&self.words, self.k)
    }

    pub fn is_maximal(&self) -> bool {
        self.kraft().is_one()
    }

    /// The member that prefixes `w`, if any (unique for a prefix code).
    pub fn prefix_of(&self, w: &[u8]) -> Option<&Word> {
        let idx = self.words.partition_point(|p| p.letters() <= w);
        if idx == 0 {
            return None;
        }
        let p = &self.words[idx - 1];
        w.starts_with(p.letters()).then_some(p)
    }

    /// Members extending `w` (including `w` itself), as a contiguous run.
    pub fn extensions_of(&self, w: &[u8]) -> &[Word] {
        let start = self.words.partition_point(|p| p.letters() < w);
        let end = start + self.words[start..].iter().take_while(|p| p.letters().starts_with(w)).count();
        &self.words[start..end]
    }

    /// Does the right ideal generated by this code contain `w`?
    pub fn ideal_contains(&self, w: &[u8]) -> bool {
        self.prefix_of(w).is_some()
    }
}

impl fmt::Display for PrefixCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for w in &self.words {
            writeln!(f, "{w}")?;
        }
        Ok(())
    }
}

/// Prefix code S with S·A* = P·A* ∩ Q·A*. Every member of S is a member of P
/// or of Q: the longer word of each comparable pair.
pub fn ideal_intersection(p: &PrefixCode, q: &PrefixCode) -> PrefixCode {
    let mut out: BTreeSet<Word> = BTreeSet::new();
    for a in p.words() {
        for b in q.extensions_of(a.letters()) {
            out.insert(b.clone());
        }
        if let Some(b) = q.prefix_of(a.letters()) {
            if b.len() < a.len() {
                out.insert(a.clone());
            }
        }
    }
    PrefixCode::from_sorted_unchecked(p.k(), out.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    fn code(ws: &[&str]) -> PrefixCode {
        PrefixCode::new(2, ws.iter().map(|s| w(s)).collect()).unwrap()
    }

    /// Pairwise definition, used as an independent route.
    fn intersection_pairwise(p: &PrefixCode, q: &PrefixCode) -> BTreeSet<Word> {
        let mut out = BTreeSet::new();
        for a in p.words() {
            for b in q.words() {
                if a.is_prefix_of(b) {
                    out.insert(b.clone());
                } else if b.is_prefix_of(a) {
                    out.insert(a.clone());
                }
            }
        }
        out
    }

    /// Membership of every short word in both ideals.
    fn intersection_by_enumeration(p: &PrefixCode, q: &PrefixCode, len: usize) -> BTreeSet<Word> {
        let both: Vec<Word> = words_up_to(2, len)
            .into_iter()
            .filter(|x| p.ideal_contains(x.letters()) && q.ideal_contains(x.letters()))
            .collect();
        PrefixCode::minimal(2, both).words().iter().cloned().collect()
    }

    #[test]
    fn prefix_relation() {
        assert!(is_prefix(&Word::empty(), &w("01")));
        assert!(is_prefix(&w("01"), &w("01")));
        assert!(!is_prefix(&w("10"), &w("01")));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_code(&[w("0"), w("10"), w("11")], 2), CodeClass::Code { maximal: true });
        assert_eq!(classify_code(&[w("0"), w("01")], 2), CodeClass::NotACode);
        assert_eq!(classify_code(&[w("00"), w("01"), w("10")], 2), CodeClass::Code { maximal: false });
        // 11 escapes the ideal, so the brute-force check agrees
        let c = code(&["00", "01", "10"]);
        assert!(!c.ideal_contains(w("11").letters()));
    }

    #[test]
    fn intersection_examples() {
        let s = ideal_intersection(&code(&["0", "10"]), &code(&["1", "01"]));
        assert_eq!(s, code(&["01", "10"]));
        assert_eq!(
            s.words().iter().cloned().collect::<BTreeSet<_>>(),
            intersection_by_enumeration(&code(&["0", "10"]), &code(&["1", "01"]), 4)
        );
        assert_eq!(ideal_intersection(&code(&["0", "1"]), &code(&["0", "1"])), code(&["0", "1"]));
        assert!(ideal_intersection(&code(&["0"]), &code(&["1"])).is_empty());
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(w("eps"), Word::empty());
        assert_eq!(w("0110").to_string(), "0110");
        assert_eq!(Word::empty().to_string(), "eps");
        assert!(Word::parse("012", 2).is_err());
        assert_eq!(Word::from_u64(5, 4), w("0101"));
        assert_eq!(w("0101").to_u64(), 5);
    }

    #[test]
    fn minimal_and_lookup() {
        let m = PrefixCode::minimal(2, vec![w("01"), w("0"), w("011"), w("1"), w("10")]);
        assert_eq!(m, code(&["0", "1"]));
        let c = code(&["0", "10", "11"]);
        assert_eq!(c.prefix_of(w("1101").letters()), Some(&w("11")));
        assert_eq!(c.prefix_of(w("1").letters()), None);
        assert_eq!(c.extensions_of(w("1").letters()), &[w("10"), w("11")]);
    }

    fn all_small_codes() -> Vec<PrefixCode> {
        // every antichain drawn from words of length 1..=3 with at most 4 members
        let pool = words_up_to(2, 3);
        let mut out = vec![PrefixCode::empty(2)];
        let mut frontier: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..4 {
            let mut next = Vec::new();
            for set in &frontier {
                let start = set.last().map_or(0, |&i| i + 1);
                for i in start..pool.len() {
                    let mut s = set.clone();
                    s.push(i);
                    let ws: Vec<Word> = s.iter().map(|&j| pool[j].clone()).collect();
                    if let Ok(c) = PrefixCode::new(2, ws) {
                        out.push(c);
                        next.push(s);
                    }
                }
            }
            frontier = next;
        }
        out
    }

    #[test]
    fn intersection_matches_both_oracles_on_small_codes() {
        let codes = all_small_codes();
        let step = (codes.len() / 120).max(1);
        for p in codes.iter().step_by(step) {
            for q in codes.iter().step_by(step) {
                let s = ideal_intersection(p, q);
                let set: BTreeSet<Word> = s.words().iter().cloned().collect();
                assert_eq!(set, intersection_pairwise(p, q));
                assert_eq!(set, intersection_by_enumeration(p, q, 7));
                assert_eq!(s, ideal_intersection(q, p));
                assert!(s.words().iter().all(|x| p.contains(x) || q.contains(x)));
            }
        }
    }

    #[test]
    fn kraft_agrees_with_essentiality() {
        for c in all_small_codes() {
            let l = c.max_len() + 1;
            let essential = all_words(2, l).iter().all(|x| c.ideal_contains(x.letters()));
            assert_eq!(essential, c.is_maximal(), "{c:?}");
            if essential {
                for x in all_words(2, c.max_len()) {
                    let hits = c.words().iter().filter(|p| p.is_prefix_of(&x)).count();
                    assert_eq!(hits, 1);
                }
            }
        }
    }
}
