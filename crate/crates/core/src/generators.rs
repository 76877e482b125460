//! Named generators and generator words.
//!
//! Words are applied left to right: the first token acts first.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::codes::{all_words, Word};
use crate::error::{Error, Result};
use crate::thompson::{compose, reduce, Element, Table};

/// Largest τ subscript for which a full table is materialized.
pub const TAU_TABLE_CAP: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    GammaAnd,
    GammaOr,
    GammaNot,
    GammaFork,
    PhiAnd,
    PhiOr,
    PhiNot,
    Sigma,
    N,
    C,
    T,
    Tau(usize, usize),
    Tau12_0,
    Inv(Box<Gen>),
}

impl Gen {
    /// `None` for the degenerate `tau(i,i)`, which acts as the identity.
    pub fn tau(i: usize, j: usize) -> Result<Option<Gen>> {
        if i == 0 || j == 0 {
            return Err(Error::BadTauIndex(i, j));
        }
        match i.cmp(&j) {
            std::cmp::Ordering::Less => Ok(Some(Gen::Tau(i, j))),
            std::cmp::Ordering::Equal => Ok(None),
            std::cmp::Ordering::Greater => Err(Error::BadTauIndex(i, j)),
        }
    }

    pub fn sigma_inv() -> Gen {
        Gen::Inv(Box::new(Gen::Sigma))
    }

    /// Formal inverse, collapsing `inv(inv(x))` to `x`.
    pub fn inv(g: Gen) -> Result<Gen> {
        match g {
            Gen::Inv(x) => Ok(*x),
            g if g.is_invertible() => Ok(Gen::Inv(Box::new(g))),
            g => Err(Error::NotInvertibleToken(g.to_string())),
        }
    }

    pub fn is_invertible(&self) -> bool {
        !matches!(self, Gen::GammaAnd | Gen::GammaOr | Gen::GammaFork)
    }

    fn is_involution(&self) -> bool {
        matches!(
            self,
            Gen::GammaNot | Gen::PhiAnd | Gen::PhiOr | Gen::PhiNot | Gen::N | Gen::C | Gen::T | Gen::Tau(..) | Gen::Tau12_0
        )
    }

    /// The token to use in an inverted word.
    pub fn inverse_token(&self) -> Result<Gen> {
        match self {
            Gen::Inv(x) => Ok((**x).clone()),
            g if g.is_involution() => Ok(g.clone()),
            Gen::Sigma => Ok(Gen::sigma_inv()),
            g => Err(Error::NotInvertibleToken(g.to_string())),
        }
    }

    /// τ subscript pair of a transposition token (through `inv`).
    pub fn tau_indices(&self) -> Option<(usize, usize)> {
        match self {
            Gen::Tau(i, j) => Some((*i, *j)),
            Gen::Inv(x) => x.tau_indices(),
            _ => None,
        }
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::GammaAnd => f.write_str("gamma_and"),
            Gen::GammaOr => f.write_str("gamma_or"),
            Gen::GammaNot => f.write_str("gamma_not"),
            Gen::GammaFork => f.write_str("gamma_fork"),
            Gen::PhiAnd => f.write_str("phi_and"),
            Gen::PhiOr => f.write_str("phi_or"),
            Gen::PhiNot => f.write_str("phi_not"),
            Gen::Sigma => f.write_str("sigma"),
            Gen::N => f.write_str("N"),
            Gen::C => f.write_str("C"),
            Gen::T => f.write_str("T"),
            Gen::Tau(i, j) => write!(f, "tau({i},{j})"),
            Gen::Tau12_0 => f.write_str("tau12_0"),
            Gen::Inv(x) => write!(f, "inv({x})"),
        }
    }
}

/// Parses one token. `tau(i,i)` parses to `None`.
pub fn parse_token(s: &str) -> Result<Option<Gen>> {
    let s = s.trim();
    let g = match s {
        "gamma_and" => Gen::GammaAnd,
        "gamma_or" => Gen::GammaOr,
        "gamma_not" => Gen::GammaNot,
        "gamma_fork" => Gen::GammaFork,
        "phi_and" => Gen::PhiAnd,
        "phi_or" => Gen::PhiOr,
        "phi_not" => Gen::PhiNot,
        "sigma" => Gen::Sigma,
        "N" => Gen::N,
        "C" => Gen::C,
        "T" => Gen::T,
        "tau12_0" => Gen::Tau12_0,
        _ => {
            if let Some(inner) = s.strip_prefix("inv(").and_then(|r| r.strip_suffix(')')) {
                return match parse_token(inner)? {
                    None => Ok(None),
                    Some(g) => Gen::inv(g).map(Some),
                };
            }
            if let Some(inner) = s.strip_prefix("tau(").and_then(|r| r.strip_suffix(')')) {
                let (a, b) = inner.split_once(',').ok_or_else(|| Error::UnknownGenerator(s.into()))?;
                let i = a.trim().parse().map_err(|_| Error::UnknownGenerator(s.into()))?;
                let j = b.trim().parse().map_err(|_| Error::UnknownGenerator(s.into()))?;
                return Gen::tau(i, j);
            }
            return Err(Error::UnknownGenerator(s.into()));
        }
    };
    Ok(Some(g))
}

impl FromStr for Gen {
    type Err = Error;
    fn from_str(s: &str) -> Result<Gen> {
        parse_token(s)?.ok_or(Error::BadTauIndex(0, 0))
    }
}

/// Whitespace-separated tokens; `#` starts a comment running to end of line.
pub fn parse_word(text: &str) -> Result<Vec<Gen>> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("");
        for tok in line.split_whitespace() {
            if let Some(g) = parse_token(tok)? {
                out.push(g);
            }
        }
    }
    Ok(out)
}

pub fn format_word(w: &[Gen]) -> String {
    w.iter().map(Gen::to_string).collect::<Vec<_>>().join(" ")
}

/// Comma-separated generator list, commas inside parentheses excluded.
pub fn parse_gen_list(s: &str) -> Result<Vec<Gen>> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for c in s.chars().chain(std::iter::once(',')) {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            _ => {}
        }
        if c == ',' && depth == 0 {
            if !cur.trim().is_empty() {
                if let Some(g) = parse_token(&cur)? {
                    out.push(g);
                }
            }
            cur.clear();
        } else {
            cur.push(c);
        }
    }
    Ok(out)
}

/// The group catalog {σ, σ⁻¹, φ_¬, φ_∨, φ_∧, (τ_{1,2})₀}.
pub fn gamma_g_set() -> Vec<Gen> {
    vec![Gen::Sigma, Gen::sigma_inv(), Gen::PhiNot, Gen::PhiOr, Gen::PhiAnd, Gen::Tau12_0]
}

/// The length-equality-preserving monoid catalog.
pub fn gamma_lep_set() -> Vec<Gen> {
    vec![Gen::GammaAnd, Gen::GammaOr, Gen::GammaNot, Gen::GammaFork]
}

/// Uniform table on `{0,1}^len` from a bit-level map.
fn uniform_table(len: usize, f: impl Fn(&[u8]) -> Vec<u8>) -> Element {
    let entries = all_words(2, len).into_iter().map(|x| {
        let y = Word::from_letters(f(x.letters()));
        (x, y)
    });
    reduce(&Table::new(2, entries).expect("uniform code"))
}

fn build_base(g: &Gen) -> Element {
    let lit = |pairs: &[(&str, &str)]| reduce(&Table::from_pairs(2, pairs));
    match g {
        Gen::GammaAnd => lit(&[("00", "0"), ("01", "0"), ("1", "eps")]),
        Gen::GammaOr => lit(&[("0", "eps"), ("10", "1"), ("11", "1")]),
        Gen::GammaNot | Gen::PhiNot | Gen::N => lit(&[("0", "1"), ("1", "0")]),
        Gen::GammaFork => lit(&[("0", "00"), ("1", "11")]),
        Gen::PhiAnd => uniform_table(3, |b| vec![b[0] ^ (b[1] & b[2]), b[1], b[2]]),
        Gen::PhiOr => uniform_table(3, |b| vec![b[0] ^ (b[1] | b[2]), b[1], b[2]]),
        Gen::Sigma => lit(&[("0", "00"), ("10", "01"), ("11", "1")]),
        Gen::C => uniform_table(2, |b| vec![b[0], b[1] ^ b[0]]),
        Gen::T => uniform_table(3, |b| vec![b[0], b[1], b[2] ^ (b[0] & b[1])]),
        Gen::Tau12_0 => lit(&[("000", "000"), ("001", "010"), ("010", "001"), ("011", "011"), ("1", "1")]),
        Gen::Tau(..) | Gen::Inv(_) => unreachable!("not a base generator"),
    }
}

const BASE: [Gen; 11] = [
    Gen::GammaAnd,
    Gen::GammaOr,
    Gen::GammaNot,
    Gen::GammaFork,
    Gen::PhiAnd,
    Gen::PhiOr,
    Gen::PhiNot,
    Gen::Sigma,
    Gen::C,
    Gen::T,
    Gen::Tau12_0,
];

fn base_tables() -> &'static BTreeMap<Gen, Element> {
    static CACHE: OnceLock<BTreeMap<Gen, Element>> = OnceLock::new();
    CACHE.get_or_init(|| {
        let mut m: BTreeMap<Gen, Element> = BASE.iter().map(|g| (g.clone(), build_base(g))).collect();
        m.insert(Gen::N, build_base(&Gen::N));
        let sigma_inv = crate::thompson::invert(&m[&Gen::Sigma]).expect("sigma is invertible");
        m.insert(Gen::sigma_inv(), sigma_inv);
        m
    })
}

/// Cached table of a non-τ generator, looking through `inv` of involutions.
fn base_ref(g: &Gen) -> Option<&'static Element> {
    let t = base_tables();
    match g {
        Gen::Inv(x) if x.is_involution() => t.get(x),
        g => t.get(g),
    }
}

/// Canonical table of a generator.
pub fn gen_table(g: &Gen) -> Result<Element> {
    if let Some((i, j)) = g.tau_indices() {
        if i == 0 || i >= j {
            return Err(Error::BadTauIndex(i, j));
        }
        if j > TAU_TABLE_CAP {
            return Err(Error::CapExceeded { needed: j, cap: TAU_TABLE_CAP });
        }
        return Ok(uniform_table(j, |b| {
            let mut v = b.to_vec();
            v.swap(i - 1, j - 1);
            v
        }));
    }
    if let Some(e) = base_tables().get(g) {
        return Ok(e.clone());
    }
    match g {
        Gen::Inv(x) => crate::thompson::invert(&gen_table(x)?),
        _ => Err(Error::UnknownGenerator(g.to_string())),
    }
}

fn tau_swap(y: &[u8], i: usize, j: usize) -> Word {
    let mut v = y.to_vec();
    v.swap(i - 1, j - 1);
    Word::from_letters(v)
}

/// `τ(i,j) ∘ x` computed on images directly, without the 2^j-entry table.
fn act_tau(i: usize, j: usize, x: &Element) -> Element {
    let mut entries = BTreeMap::new();
    for (key, img) in x.entries() {
        if img.len() >= j {
            entries.insert(key.clone(), tau_swap(img.letters(), i, j));
        } else {
            for z in all_words(x.k(), j - img.len()) {
                entries.insert(key.concat(z.letters()), tau_swap(img.concat(z.letters()).letters(), i, j));
            }
        }
    }
    reduce(&Table::from_map_unchecked(x.k(), entries))
}

/// `g ∘ x`: apply `x`, then the generator.
pub fn act(g: &Gen, x: &Element) -> Result<Element> {
    if let Some((i, j)) = g.tau_indices() {
        if i == 0 || i >= j {
            return Err(Error::BadTauIndex(i, j));
        }
        if x.k() != 2 {
            return Err(Error::ArityMismatch(2, x.k()));
        }
        return Ok(act_tau(i, j, x));
    }
    compose(&gen_table(g)?, x)
}

/// Evaluates a word starting from `start`; `eval_word` starts from the identity.
pub fn eval_word_from(start: &Element, w: &[Gen]) -> Result<Element> {
    let mut acc = start.clone();
    for g in w {
        acc = act(g, &acc)?;
    }
    Ok(acc)
}

pub fn eval_word(w: &[Gen]) -> Result<Element> {
    eval_word_from(&Element::identity(2), w)
}

/// Applies the tokens to a single word in sequence; `None` once undefined.
pub fn apply_word(w: &[Gen], x: &Word) -> Result<Option<Word>> {
    let mut cur = x.clone();
    for g in w {
        if let Some((i, j)) = g.tau_indices() {
            if cur.len() < j {
                return Ok(None);
            }
            cur = tau_swap(cur.letters(), i, j);
            continue;
        }
        let t = match base_ref(g) {
            Some(t) => std::borrow::Cow::Borrowed(t),
            None => std::borrow::Cow::Owned(gen_table(g)?),
        };
        match t.apply(&cur) {
            Some(y) => cur = y,
            None => return Ok(None),
        }
    }
    Ok(Some(cur))
}

/// Element of `w` computed from its action on the uniform code `{0,1}^m`.
/// Valid whenever `w` is defined on every word of length `m`, which is
/// checked; `None` otherwise.
pub fn eval_word_uniform(w: &[Gen], m: usize) -> Result<Option<Element>> {
    let mut entries = BTreeMap::new();
    for x in all_words(2, m) {
        match apply_word(w, &x)? {
            Some(y) => {
                entries.insert(x, y);
            }
            None => return Ok(None),
        }
    }
    Ok(Some(reduce(&Table::from_map_unchecked(2, entries))))
}

/// Element of a word over Γ_lep ∪ τ, evaluated bit-parallel on all of
/// `{0,1}^m` at once. `None` if some token meets a too-short word.
pub fn eval_lep_word_uniform(w: &[Gen], m: usize) -> Result<Option<Element>> {
    if m > 24 {
        return Err(Error::CapExceeded { needed: m, cap: 24 });
    }
    let rows = 1usize << m;
    let chunks = rows.div_ceil(64);
    let last_mask = if rows.is_multiple_of(64) { u64::MAX } else { (1u64 << (rows % 64)) - 1 };
    // position p holds bit p of every input row, rows packed into u64 chunks
    let mut pos: Vec<Vec<u64>> = (0..m)
        .map(|p| {
            let mut v = vec![0u64; chunks];
            for r in 0..rows {
                if (r >> (m - 1 - p)) & 1 == 1 {
                    v[r / 64] |= 1 << (r % 64);
                }
            }
            v
        })
        .collect();
    let not = |v: &[u64]| -> Vec<u64> {
        let mut o: Vec<u64> = v.iter().map(|x| !x).collect();
        if let Some(l) = o.last_mut() {
            *l &= last_mask;
        }
        o
    };
    for g in w {
        let need = match g {
            Gen::GammaAnd | Gen::GammaOr => 2,
            Gen::GammaNot | Gen::GammaFork | Gen::N | Gen::PhiNot => 1,
            Gen::Inv(x) if matches!(**x, Gen::GammaNot | Gen::N | Gen::PhiNot) => 1,
            g => match g.tau_indices() {
                Some((i, j)) if i >= 1 && i < j => j,
                Some((i, j)) => return Err(Error::BadTauIndex(i, j)),
                None => return Err(Error::NotLep(g.to_string())),
            },
        };
        if pos.len() < need {
            return Ok(None);
        }
        match g {
            Gen::GammaAnd | Gen::GammaOr => {
                let b = pos.remove(1);
                let a = &mut pos[0];
                for (x, y) in a.iter_mut().zip(&b) {
                    if *g == Gen::GammaAnd {
                        *x &= y;
                    } else {
                        *x |= y;
                    }
                }
            }
            Gen::GammaFork => {
                let a = pos[0].clone();
                pos.insert(0, a);
            }
            g => match g.tau_indices() {
                Some((i, j)) => pos.swap(i - 1, j - 1),
                None => pos[0] = not(&pos[0]),
            },
        }
    }
    let mut entries = BTreeMap::new();
    for r in 0..rows {
        let x = Word::from_u64(r as u64, m);
        let y: Vec<u8> = pos.iter().map(|v| ((v[r / 64] >> (r % 64)) & 1) as u8).collect();
        entries.insert(x, Word::from_letters(y));
    }
    Ok(Some(reduce(&Table::from_map_unchecked(2, entries))))
}

pub fn word_inverse(w: &[Gen]) -> Result<Vec<Gen>> {
    w.iter().rev().map(Gen::inverse_token).collect()
}

/// Word for `(τ_{i,j})₀` through conjugation of `(τ_{1,2})₀`.
pub fn tau0_expand(i: usize, j: usize) -> Result<Vec<Gen>> {
    if i == 0 || i >= j {
        return Err(Error::BadTauIndex(i, j));
    }
    let outer = Gen::tau(2, i + 1)?;
    let inner = Gen::tau(3, j + 1)?;
    let mut w = Vec::new();
    w.extend(outer.clone());
    w.extend(inner.clone());
    w.push(Gen::Tau12_0);
    w.extend(inner);
    w.extend(outer);
    Ok(w)
}

/// Largest τ subscript in a word, 0 if none.
pub fn max_tau(w: &[Gen]) -> usize {
    w.iter().filter_map(Gen::tau_indices).map(|(_, j)| j).max().unwrap_or(0)
}
