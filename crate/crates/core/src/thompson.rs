//! Right-ideal morphism tables and their canonical (fully merged) form.
//!
//! `compose(second, first)` applies `first` and then `second`.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::Deref;
use std::sync::OnceLock;

use crate::codes::{ideal_intersection, PrefixCode, Word};
use crate::error::{Error, Result};

/// Finite map from a prefix code to words. Images need not form a code.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Table {
    k: u8,
    map: BTreeMap<Word, Word>,
}

impl Table {
    pub fn new(k: u8, entries: impl IntoIterator<Item = (Word, Word)>) -> Result<Table> {
        let mut map = BTreeMap::new();
        for (x, y) in entries {
            if x.letters().iter().chain(y.letters()).any(|&a| a >= k) {
                return Err(Error::NotACode(format!("entry {x} -> {y} uses a letter outside k={k}")));
            }
            if map.insert(x.clone(), y).is_some() {
                return Err(Error::NotACode(format!("key {x} appears twice")));
            }
        }
        let keys: Vec<&Word> = map.keys().collect();
        if let Some(p) = keys.windows(2).find(|p| p[0].is_prefix_of(p[1])) {
            return Err(Error::NotACode(format!("key {} prefixes key {}", p[0], p[1])));
        }
        Ok(Table { k, map })
    }

    /// Parses `key image` pairs like `("00", "10")`; panics on bad input.
    pub fn from_pairs(k: u8, pairs: &[(&str, &str)]) -> Table {
        Table::new(
            k,
            pairs.iter().map(|(a, b)| (Word::parse(a, k).unwrap(), Word::parse(b, k).unwrap())),
        )
        .expect("valid table literal")
    }

    pub(crate) fn from_map_unchecked(k: u8, map: BTreeMap<Word, Word>) -> Table {
        Table { k, map }
    }

    pub fn identity(k: u8) -> Table {
        let mut map = BTreeMap::new();
        map.insert(Word::empty(), Word::empty());
        Table { k, map }
    }

    pub fn empty(k: u8) -> Table {
        Table { k, map: BTreeMap::new() }
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Word, &Word)> {
        self.map.iter()
    }

    pub fn get(&self, key: &Word) -> Option<&Word> {
        self.map.get(key)
    }

    pub fn domain_code(&self) -> PrefixCode {
        PrefixCode::from_sorted_unchecked(self.k, self.map.keys().cloned().collect())
    }

    /// Minimal elements of the image set: the code of the image ideal.
    pub fn image_code(&self) -> PrefixCode {
        PrefixCode::minimal(self.k, self.map.values().cloned())
    }

    /// Images pairwise distinct and prefix-incomparable.
    pub fn is_injective(&self) -> bool {
        let mut ys: Vec<&Word> = self.map.values().collect();
        ys.sort();
        ys.windows(2).all(|p| !p[0].is_prefix_of(p[1]))
    }

    /// Longest word among keys and images.
    pub fn ell(&self) -> usize {
        self.map.iter().map(|(x, y)| x.len().max(y.len())).max().unwrap_or(0)
    }

    pub fn max_key_len(&self) -> usize {
        self.map.keys().map(Word::len).max().unwrap_or(0)
    }

    /// The entry whose key prefixes `w`. The greatest key not above `w` is
    /// the only candidate, since keys form a prefix code.
    pub fn lookup(&self, w: &[u8]) -> Option<(&Word, &Word)> {
        let (p, q) = self.map.range::<[u8], _>((std::ops::Bound::Unbounded, std::ops::Bound::Included(w))).next_back()?;
        w.starts_with(p.letters()).then_some((p, q))
    }

    pub fn apply(&self, w: &Word) -> Option<Word> {
        self.apply_slice(w.letters())
    }

    pub fn apply_slice(&self, w: &[u8]) -> Option<Word> {
        let (p, q) = self.lookup(w)?;
        Some(q.concat(&w[p.len()..]))
    }

    pub fn parse(text: &str) -> Result<Table> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty table file".into()))?;
        let k = header
            .strip_prefix("thompson")
            .map(str::trim)
            .and_then(|r| r.strip_prefix("k="))
            .and_then(|r| r.trim().parse::<u8>().ok())
            .filter(|&k| (2..=10).contains(&k))
            .ok_or_else(|| Error::Parse(format!("bad table header `{header}`")))?;
        let mut entries = Vec::new();
        for l in lines {
            let (a, b) = l.split_once("->").ok_or_else(|| Error::Parse(format!("bad table line `{l}`")))?;
            entries.push((Word::parse(a, k)?, Word::parse(b, k)?));
        }
        Table::new(k, entries)
    }
}

impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "thompson k={}", self.k)?;
        for (x, y) in &self.map {
            writeln!(f, "{x} -> {y}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (x, y)) in self.map.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}->{y}")?;
        }
        f.write_str("}")
    }
}

/// Predicates on an element.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Flags {
    pub is_injective: bool,
    pub in_g: bool,
    pub is_lp: bool,
    pub is_lep: bool,
    pub is_monotone: bool,
    pub in_fix0: bool,
    pub in_fix1: bool,
    pub in_stab01: bool,
}

/// A table in canonical form. Flags are computed on first use.
#[derive(Clone)]
pub struct Element {
    table: Table,
    flags: OnceLock<Flags>,
}

impl Element {
    pub fn identity(k: u8) -> Element {
        Element::canonical(Table::identity(k))
    }

    pub fn empty(k: u8) -> Element {
        Element::canonical(Table::empty(k))
    }

    fn canonical(table: Table) -> Element {
        Element { table, flags: OnceLock::new() }
    }

    pub fn table(&self) -> &Table {
        &self.table
    }

    pub fn into_table(self) -> Table {
        self.table
    }

    pub fn is_identity(&self) -> bool {
        self.table.len() == 1 && self.table.map.iter().all(|(x, y)| x.is_empty() && y.is_empty())
    }

    pub fn flags(&self) -> Flags {
        *self.flags.get_or_init(|| classify_table(&self.table))
    }

    pub fn parse(text: &str) -> Result<Element> {
        Ok(reduce(&Table::parse(text)?))
    }
}

impl Deref for Element {
    type Target = Table;
    fn deref(&self) -> &Table {
        &self.table
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.table == other.table
    }
}

impl Eq for Element {}

impl Hash for Element {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.table.hash(state)
    }
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Element {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.table.cmp(&other.table)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.table, f)
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.table, f)
    }
}

/// Refines `t` so that its key set becomes `p`.
pub fn restrict_to(t: &Table, p: &PrefixCode) -> Result<Table> {
    let mut map = BTreeMap::new();
    for w in p.words() {
        let (key, img) = t.lookup(w.letters()).ok_or_else(|| Error::RefinementOutsideDomain(w.to_string()))?;
        map.insert(w.clone(), img.concat(&w.letters()[key.len()..]));
    }
    Ok(Table { k: t.k, map })
}

/// `Some((x, y))` if the k entries are exactly `x a -> y a` for `a = 0..k`.
fn merge_window(window: &[(Word, Word)], k: u8) -> Option<(Word, Word)> {
    let (x0, y0) = &window[0];
    if x0.is_empty() || y0.is_empty() {
        return None;
    }
    let (xp, yp) = (&x0.letters()[..x0.len() - 1], &y0.letters()[..y0.len() - 1]);
    for (a, (x, y)) in window.iter().enumerate() {
        let a = a as u8;
        if x.len() != x0.len() || y.len() != y0.len() || x.letters().last() != Some(&a) || y.letters().last() != Some(&a) {
            return None;
        }
        if &x.letters()[..xp.len()] != xp || &y.letters()[..yp.len()] != yp {
            return None;
        }
    }
    debug_assert_eq!(window.len(), k as usize);
    Some((Word::from_letters(xp.to_vec()), Word::from_letters(yp.to_vec())))
}

/// Merges sibling groups until none remain. Sibling keys are contiguous in
/// sorted order, so each pass scans windows of k consecutive entries.
pub fn reduce(t: &Table) -> Element {
    let k = t.k as usize;
    let mut entries: Vec<(Word, Word)> = t.map.iter().map(|(x, y)| (x.clone(), y.clone())).collect();
    loop {
        let mut out = Vec::with_capacity(entries.len());
        let mut changed = false;
        let mut i = 0;
        while i < entries.len() {
            if i + k <= entries.len() {
                if let Some(m) = merge_window(&entries[i..i + k], t.k) {
                    out.push(m);
                    i += k;
                    changed = true;
                    continue;
                }
            }
            out.push(std::mem::take(&mut entries[i]));
            i += 1;
        }
        entries = out;
        if !changed {
            break;
        }
    }
    Element::canonical(Table { k: t.k, map: entries.into_iter().collect() })
}

/// Restriction steps on entries whose image properly prefixes another image,
/// until the image set is an antichain.
fn antichain_images(t: &Table) -> Vec<(Word, Word)> {
    let mut entries: Vec<(Word, Word)> = t.map.iter().map(|(x, y)| (x.clone(), y.clone())).collect();
    loop {
        let mut ys: Vec<&Word> = entries.iter().map(|e| &e.1).collect();
        ys.sort();
        ys.dedup();
        let bad: Vec<Word> = ys.windows(2).filter(|p| p[0].is_prefix_of(p[1])).map(|p| p[0].clone()).collect();
        if bad.is_empty() {
            return entries;
        }
        let mut next = Vec::with_capacity(entries.len() * 2);
        for (x, y) in entries {
            if bad.binary_search(&y).is_ok() {
                for a in 0..t.k {
                    next.push((x.child(a), y.child(a)));
                }
            } else {
                next.push((x, y));
            }
        }
        entries = next;
    }
}

/// Per-entry suffix transfer: the restriction of `t` to the preimage of the
/// right ideal generated by `s`. An entry whose image already lies in the
/// ideal is kept; otherwise its key is extended by the suffixes that carry
/// its image onto members of `s`.
pub fn preimage_restrict(t: &Table, s: &PrefixCode) -> Table {
    let mut map = BTreeMap::new();
    for (x, y) in &t.map {
        if s.prefix_of(y.letters()).is_some() {
            map.insert(x.clone(), y.clone());
            continue;
        }
        for sw in s.extensions_of(y.letters()) {
            map.insert(x.concat(&sw.letters()[y.len()..]), sw.clone());
        }
    }
    Table { k: t.k, map }
}

/// Code of the ideal φ(R·A*).
pub fn image_of_ideal(t: &Table, r: &PrefixCode) -> PrefixCode {
    let s = ideal_intersection(r, &t.domain_code());
    let restricted = restrict_to(t, &s).expect("intersection lies in the domain ideal");
    restricted.image_code()
}

/// Unreduced composite table of `first` then `second`.
pub fn compose_tables(second: &Table, first: &Table) -> Result<Table> {
    if second.k != first.k {
        return Err(Error::ArityMismatch(second.k, first.k));
    }
    let k = first.k;
    let prepared = antichain_images(first);
    let images = PrefixCode::minimal(k, prepared.iter().map(|e| e.1.clone()));
    let s = ideal_intersection(&images, &second.domain_code());
    let mut map = BTreeMap::new();
    for (x, y) in prepared {
        for sw in s.extensions_of(y.letters()) {
            let z = second.apply(sw).expect("intersection lies in the domain ideal");
            map.insert(x.concat(&sw.letters()[y.len()..]), z);
        }
    }
    Ok(Table { k, map })
}

pub fn compose(second: &Element, first: &Element) -> Result<Element> {
    Ok(reduce(&compose_tables(&second.table, &first.table)?))
}

pub fn invert(g: &Element) -> Result<Element> {
    if !g.table.is_injective() {
        return Err(Error::NotInvertible("images are not a prefix code of distinct words".into()));
    }
    let map = g.table.map.iter().map(|(x, y)| (y.clone(), x.clone())).collect();
    Ok(reduce(&Table { k: g.table.k, map }))
}

pub fn apply(t: &Element, w: &Word) -> Option<Word> {
    t.apply(w)
}

pub fn equal(a: &Element, b: &Element) -> bool {
    a.table == b.table
}

pub fn classify(t: &Element) -> Flags {
    t.flags()
}

/// Entries under the one-letter prefix `a`, with a root key split onto it.
pub fn restrict_half(t: &Table, a: u8) -> Table {
    let mut map = BTreeMap::new();
    for (x, y) in &t.map {
        if x.is_empty() {
            map.insert(Word::from_letters(vec![a]), y.child(a));
        } else if x.letters()[0] == a {
            map.insert(x.clone(), y.clone());
        }
    }
    Table { k: t.k, map }
}

fn half_is_fixed(t: &Table, a: u8) -> bool {
    let r = reduce(&restrict_half(t, a));
    let w = Word::from_letters(vec![a]);
    r.table.len() == 1 && r.table.get(&w) == Some(&w)
}

fn classify_table(t: &Table) -> Flags {
    if t.is_empty() {
        return Flags::default();
    }
    let dom_max = t.domain_code().is_maximal();
    let is_injective = t.is_injective();
    let in_g = dom_max && is_injective && t.image_code().is_maximal();
    let is_lp = t.map.iter().all(|(x, y)| x.len() == y.len());
    let mut deltas = t.map.iter().map(|(x, y)| y.len() as i64 - x.len() as i64);
    let first = deltas.next().unwrap();
    let is_lep = dom_max && deltas.all(|d| d == first);
    let is_monotone = is_lep && t.k == 2 && monotone_uniform(t);
    let in_stab01 = t.k >= 2
        && (0..2u8).all(|a| {
            let h = restrict_half(t, a);
            h.map.values().all(|y| y.letters().first() == Some(&a))
        });
    Flags {
        is_injective,
        in_g,
        is_lp,
        is_lep,
        is_monotone,
        in_fix0: half_is_fixed(t, 0),
        in_fix1: t.k >= 2 && half_is_fixed(t, 1),
        in_stab01,
    }
}

/// Order preservation of the uniform-length table on single-bit covers.
fn monotone_uniform(t: &Table) -> bool {
    let m = t.max_key_len();
    if m > 24 {
        return false;
    }
    let f = |x: u64| t.apply(&Word::from_u64(x, m)).expect("maximal domain");
    let vals: Vec<Vec<u8>> = (0..1u64 << m).map(|x| f(x).into_letters()).collect();
    (0..1usize << m).all(|x| {
        (0..m).filter(|i| x & (1 << i) == 0).all(|i| {
            let (lo, hi) = (&vals[x], &vals[x | (1 << i)]);
            lo.iter().zip(hi).all(|(a, b)| a <= b)
        })
    })
}

fn embed_at(g: &Element, a: u8) -> Result<Element> {
    if g.table.k != 2 || !g.flags().in_g {
        return Err(Error::NotGroupElement);
    }
    let b = 1 - a;
    let mut map = BTreeMap::new();
    for (x, y) in &g.table.map {
        map.insert(Word::from_letters(vec![a]).concat(x.letters()), Word::from_letters(vec![a]).concat(y.letters()));
    }
    map.insert(Word::from_letters(vec![b]), Word::from_letters(vec![b]));
    Ok(reduce(&Table { k: 2, map }))
}

/// `0x -> 0 g(x)`, identity on `1A*`.
pub fn embed0(g: &Element) -> Result<Element> {
    embed_at(g, 0)
}

/// `1x -> 1 g(x)`, identity on `0A*`.
pub fn embed1(g: &Element) -> Result<Element> {
    embed_at(g, 1)
}

pub fn embed_pair(f: &Element, g: &Element) -> Result<Element> {
    compose(&embed0(f)?, &embed1(g)?)
}

/// Rewrites a chain of tables (application order) so that each table's
/// domain code is exactly the previous table's image code, without changing
/// the composite. Built back to front: each step intersects the current
/// table's image ideal with the domain ideal of the already-fixed tail.
pub fn direct_composable_chain(chain: &[Table]) -> Result<Vec<Table>> {
    let Some(last) = chain.last() else {
        return Ok(Vec::new());
    };
    if last.is_empty() {
        return Err(Error::EmptyComposite);
    }
    let mut rest: Vec<Table> = vec![last.clone()];
    for phi in chain[..chain.len() - 1].iter().rev() {
        if phi.k != rest[0].k {
            return Err(Error::ArityMismatch(phi.k, rest[0].k));
        }
        let s = ideal_intersection(&phi.image_code(), &rest[0].domain_code());
        if s.is_empty() {
            return Err(Error::EmptyComposite);
        }
        let head = preimage_restrict(phi, &s);
        let mut next = Vec::with_capacity(rest.len() + 1);
        let mut dom = head.image_code();
        next.push(head);
        for t in &rest {
            let r = restrict_to(t, &dom)?;
            dom = r.image_code();
            next.push(r);
        }
        rest = next;
    }
    Ok(rest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::words_up_to;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn t(pairs: &[(&str, &str)]) -> Table {
        Table::from_pairs(2, pairs)
    }

    fn e(pairs: &[(&str, &str)]) -> Element {
        reduce(&t(pairs))
    }

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    fn sigma() -> Element {
        e(&[("0", "00"), ("10", "01"), ("11", "1")])
    }

    fn phi_not() -> Element {
        e(&[("0", "1"), ("1", "0")])
    }

    /// Merges in a random order: pick any mergeable sibling group.
    fn reduce_random(t: &Table, rng: &mut impl Rng) -> Table {
        let mut map = t.map.clone();
        loop {
            let entries: Vec<(Word, Word)> = map.iter().map(|(a, b)| (a.clone(), b.clone())).collect();
            let mut cands = Vec::new();
            for i in 0..entries.len().saturating_sub(1) {
                let (x, y) = &entries[i];
                if x.letters().last() != Some(&0) || y.letters().last() != Some(&0) {
                    continue;
                }
                let xp = &x.letters()[..x.len() - 1];
                let yp = &y.letters()[..y.len() - 1];
                let sib = Word::from_letters([xp, &[1]].concat());
                if map.get(&sib) == Some(&Word::from_letters([yp, &[1]].concat())) {
                    cands.push((Word::from_letters(xp.to_vec()), Word::from_letters(yp.to_vec())));
                }
            }
            let Some((x, y)) = cands.choose(rng).cloned() else {
                return Table { k: 2, map };
            };
            map.remove(&x.child(0));
            map.remove(&x.child(1));
            map.insert(x, y);
        }
    }

    #[test]
    fn restrict_examples() {
        let p = PrefixCode::new(2, vec![w("00"), w("01"), w("1")]).unwrap();
        assert_eq!(restrict_to(&t(&[("0", "1"), ("1", "0")]), &p).unwrap(), t(&[("00", "10"), ("01", "11"), ("1", "0")]));
        let p = PrefixCode::new(2, vec![w("0"), w("1")]).unwrap();
        assert_eq!(restrict_to(&Table::identity(2), &p).unwrap(), t(&[("0", "0"), ("1", "1")]));
        let src = t(&[("0", "00"), ("1", "11")]);
        let p = PrefixCode::new(2, vec![w("0"), w("10"), w("11")]).unwrap();
        let r = restrict_to(&src, &p).unwrap();
        assert_eq!(r, t(&[("0", "00"), ("10", "110"), ("11", "111")]));
        for x in words_up_to(2, 5) {
            match r.apply(&x) {
                Some(y) => assert_eq!(Some(y), src.apply(&x)),
                None => assert!(p.prefix_of(x.letters()).is_none()),
            }
        }
        let p = PrefixCode::new(2, vec![w("0")]).unwrap();
        assert!(matches!(restrict_to(&t(&[("1", "1")]), &p), Err(Error::RefinementOutsideDomain(_))));
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(e(&[("00", "10"), ("01", "11"), ("1", "0")]), phi_not());
        assert!(e(&[("0", "0"), ("1", "1")]).is_identity());
        // the uniform table of C still merges on the 0-half
        let c = t(&[("00", "00"), ("01", "01"), ("10", "11"), ("11", "10")]);
        assert_eq!(reduce(&c).table(), &t(&[("0", "0"), ("10", "11"), ("11", "10")]));
        let canon = t(&[("0", "0"), ("10", "11"), ("11", "10")]);
        assert_eq!(reduce(&canon).table(), &canon);
    }

    #[test]
    fn reduce_is_confluent_under_random_orders() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let g = crate::sample::random_table(&mut rng, 2, 5, false);
            let canon = reduce(&g);
            for _ in 0..3 {
                assert_eq!(&reduce_random(&g, &mut rng), canon.table());
            }
            assert_eq!(reduce(canon.table()), canon);
        }
    }

    /// Apply-oracle: agreement wherever the sequential application is defined,
    /// and identical definedness on words long enough to pass every key.
    fn check_composite(c: &Element, second: &Element, first: &Element) {
        let l = first.ell() + second.ell() + 1;
        for x in words_up_to(2, l) {
            let seq = first.apply(&x).and_then(|y| second.apply(&y));
            if let Some(z) = &seq {
                assert_eq!(c.apply(&x).as_ref(), Some(z), "at {x}");
            } else if x.len() == l {
                assert_eq!(c.apply(&x), None, "at {x}");
            }
        }
    }

    #[test]
    fn compose_examples() {
        assert!(compose(&phi_not(), &phi_not()).unwrap().is_identity());
        let and = e(&[("00", "0"), ("01", "0"), ("1", "eps")]);
        let fork = e(&[("0", "00"), ("1", "11")]);
        let c = compose(&and, &fork).unwrap();
        assert!(c.is_identity());
        check_composite(&c, &and, &fork);
        let or = e(&[("0", "eps"), ("10", "1"), ("11", "1")]);
        let c = compose(&and, &or).unwrap();
        check_composite(&c, &and, &or);
        let expect = Table::new(
            2,
            PrefixCode::uniform(2, 3).words().iter().map(|x| {
                let b = x.letters();
                (x.clone(), Word::from_letters(vec![(b[0] | b[1]) & b[2]]))
            }),
        )
        .unwrap();
        assert_eq!(c, reduce(&expect));
        let inv = invert(&sigma()).unwrap();
        assert!(compose(&sigma(), &inv).unwrap().is_identity());
        assert!(compose(&inv, &sigma()).unwrap().is_identity());
        let k3 = reduce(&Table::identity(3));
        assert!(matches!(compose(&k3, &sigma()), Err(Error::ArityMismatch(3, 2))));
        // disjoint image and domain
        let c = compose(&e(&[("1", "1")]), &e(&[("0", "0")])).unwrap();
        assert!(c.is_empty());
    }

    #[test]
    fn compose_matches_oracle_on_random_tables() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..400 {
            let a = reduce(&crate::sample::random_table(&mut rng, 2, 3, false));
            let b = reduce(&crate::sample::random_table(&mut rng, 2, 3, false));
            let c = compose(&b, &a).unwrap();
            check_composite(&c, &b, &a);
        }
    }

    #[test]
    fn invert_examples() {
        assert_eq!(invert(&sigma()).unwrap(), e(&[("00", "0"), ("01", "10"), ("1", "11")]));
        assert!(invert(&Element::identity(2)).unwrap().is_identity());
        let tau = e(&[("00", "00"), ("01", "10"), ("10", "01"), ("11", "11")]);
        assert_eq!(invert(&tau).unwrap(), tau);
        let and = e(&[("00", "0"), ("01", "0"), ("1", "eps")]);
        assert!(matches!(invert(&and), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn apply_examples() {
        assert_eq!(sigma().apply(&w("1101")), Some(w("101")));
        let phi_or = e(&[
            ("000", "000"),
            ("001", "101"),
            ("010", "110"),
            ("011", "111"),
            ("100", "100"),
            ("101", "001"),
            ("110", "010"),
            ("111", "011"),
        ]);
        assert_eq!(phi_or.apply(&w("011")), Some(w("111")));
        assert_eq!(phi_not().apply(&Word::empty()), None);
    }

    #[test]
    fn classify_examples() {
        let fork = e(&[("0", "00"), ("1", "11")]).flags();
        assert!(fork.is_lep && !fork.is_lp && fork.is_monotone && !fork.in_g);
        assert!(!sigma().flags().is_lep);
        assert!(sigma().flags().in_g);
        let n = phi_not().flags();
        assert!(!n.is_monotone && n.is_lp && n.in_g);
        let id = Element::identity(2).flags();
        assert!(id.in_fix0 && id.in_fix1 && id.in_stab01);
        assert_eq!(Element::empty(2).flags(), Flags::default());
    }

    #[test]
    fn embed_examples() {
        assert_eq!(embed0(&phi_not()).unwrap(), e(&[("00", "01"), ("01", "00"), ("1", "1")]));
        assert!(embed0(&Element::identity(2)).unwrap().is_identity());
        assert_eq!(embed_pair(&phi_not(), &Element::identity(2)).unwrap(), embed0(&phi_not()).unwrap());
        let f = embed0(&sigma()).unwrap();
        assert!(f.flags().in_fix1 && !f.flags().in_fix0 && f.flags().in_stab01);
        let g = embed1(&phi_not()).unwrap();
        assert!(g.flags().in_fix0);
        assert_eq!(compose(&f, &g).unwrap(), compose(&g, &f).unwrap());
        let fork = e(&[("0", "00"), ("1", "11")]);
        assert_eq!(embed0(&fork), Err(Error::NotGroupElement));
    }

    fn chain_ok(chain: &[Table]) {
        let out = direct_composable_chain(chain).unwrap();
        assert_eq!(out.len(), chain.len());
        for p in out.windows(2) {
            assert_eq!(p[0].image_code(), p[1].domain_code());
        }
        let bound: usize = chain.iter().map(Table::ell).sum();
        assert!(out.iter().all(|t| t.ell() <= bound));
        let fold = |ts: &[Table]| {
            ts.iter().skip(1).fold(reduce(&ts[0]), |acc, t| compose(&reduce(t), &acc).unwrap())
        };
        assert_eq!(fold(&out), fold(chain));
    }

    #[test]
    fn chain_examples() {
        chain_ok(&[Table::identity(2)]);
        let fork = t(&[("0", "00"), ("1", "11")]);
        let and = t(&[("00", "0"), ("01", "0"), ("1", "eps")]);
        chain_ok(&[fork, and.clone()]);
        let sig = t(&[("0", "00"), ("10", "01"), ("11", "1")]);
        let out = direct_composable_chain(&[sig.clone(), and.clone()]).unwrap();
        let expect = ideal_intersection(&sig.image_code(), &and.domain_code());
        assert_eq!(out[0].image_code(), expect);
        assert_eq!(out[1].domain_code(), expect);
        chain_ok(&[sig, and]);
        assert_eq!(
            direct_composable_chain(&[t(&[("0", "0")]), t(&[("1", "1")])]),
            Err(Error::EmptyComposite)
        );
    }
}
