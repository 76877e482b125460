//! Compilers between circuits and generator words.
//!
//! Positions in τ tokens are 1-based, as everywhere in generator words.
//! Words for group elements place a flag letter at position 1; the stacked
//! wire values follow it.

use std::collections::BTreeSet;
use std::fmt;

use crate::circuits::{
    adjacent_swaps_for, desugar, layerize, strip_relabels, Circuit, FanoutBuilder, GateKind, Slice, Unit, Wire,
};
use crate::codes::{all_words, Word};
use crate::error::{Error, Result};
use crate::generators::{eval_word, eval_word_from, gen_table, max_tau, parse_word, word_inverse, Gen};
use crate::thompson::{direct_composable_chain, reduce, Element, Table};

/// Largest input width for exhaustive pair verification.
pub const PAIR_WIDTH_CAP: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompileReport {
    pub word: Vec<Gen>,
    pub source_size: usize,
    pub word_length: usize,
    pub max_tau: usize,
}

impl CompileReport {
    pub fn new(word: Vec<Gen>, source_size: usize) -> CompileReport {
        CompileReport { word_length: word.len(), max_tau: max_tau(&word), word, source_size }
    }

    /// Reads the word back; the trailer is a comment, `source_size` is taken
    /// from it when present.
    pub fn parse(text: &str) -> Result<CompileReport> {
        let word = parse_word(text)?;
        let source_size = text
            .lines()
            .filter_map(|l| l.trim().strip_prefix('#'))
            .flat_map(|l| l.split_whitespace())
            .find_map(|kv| kv.strip_prefix("source_size=").and_then(|v| v.parse().ok()))
            .unwrap_or(0);
        Ok(CompileReport::new(word, source_size))
    }
}

impl fmt::Display for CompileReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", crate::generators::format_word(&self.word))?;
        writeln!(
            f,
            "# source_size={} word_length={} max_tau={}",
            self.source_size, self.word_length, self.max_tau
        )
    }
}

/// Word under construction, with helpers for moving letters around.
#[derive(Default)]
struct WordBuf(Vec<Gen>);

impl WordBuf {
    fn push(&mut self, g: Gen) {
        self.0.push(g);
    }

    fn tau(&mut self, i: usize, j: usize) {
        if i != j {
            self.0.push(Gen::Tau(i.min(j), i.max(j)));
        }
    }

    /// Moves the letter at `from` to `to`, shifting the letters in between.
    fn mv(&mut self, from: usize, to: usize) {
        if from < to {
            for p in from..to {
                self.tau(p, p + 1);
            }
        } else {
            for p in (to..from).rev() {
                self.tau(p, p + 1);
            }
        }
    }

    fn len(&self) -> usize {
        self.0.len()
    }
}

// ---------------------------------------------------------------------------
// circuits to Γ_lep words

/// Positional stack of live wires. `None` marks the junk wire into which
/// dangling values are merged.
struct LepStack {
    slots: Vec<Option<Wire>>,
    junk: bool,
    w: WordBuf,
}

impl LepStack {
    fn pos(&self, x: Option<Wire>) -> usize {
        self.slots.iter().position(|s| *s == x).expect("slot is live")
    }

    fn fetch(&mut self, x: Option<Wire>, target: usize) {
        let p = self.pos(x);
        if p != target {
            self.w.tau(target + 1, p + 1);
            self.slots.swap(target, p);
        }
    }

    fn absorb(&mut self, x: Wire) {
        if !self.junk {
            let p = self.pos(Some(x));
            self.slots[p] = None;
            self.junk = true;
            return;
        }
        self.fetch(Some(x), 0);
        self.fetch(None, 1);
        self.w.push(Gen::GammaAnd);
        self.slots.remove(1);
        self.slots[0] = None;
    }
}

/// Word over Γ_lep ∪ τ whose element, restricted to `{0,1}^m`, is the
/// circuit's function.
///
/// Operands are fetched to the front with τ(1,p) and τ(2,p) and the gate's γ
/// is applied; ID and SWAP only relabel. Dangling wires are AND-merged into a
/// junk wire that is finally erased as `OR(AND(j, NOT j), o)`.
pub fn circuit_to_lep_word(c: &Circuit) -> Result<CompileReport> {
    let source_size = c.size();
    let s = strip_relabels(c)?;
    if s.m() == 0 && s.n() == 0 {
        return Ok(CompileReport::new(Vec::new(), source_size));
    }
    if s.m() == 0 || s.n() == 0 {
        return Err(Error::EmptyInput);
    }
    let dangling: BTreeSet<Wire> = s.dangling().into_iter().collect();
    let mut st = LepStack { slots: (0..s.m()).map(|i| Some(Wire::In(i))).collect(), junk: false, w: WordBuf::default() };
    for i in 0..s.m() {
        if dangling.contains(&Wire::In(i)) {
            st.absorb(Wire::In(i));
        }
    }
    for (g, gate) in s.gates().iter().enumerate() {
        st.fetch(Some(gate.inputs[0]), 0);
        if gate.inputs.len() == 2 {
            st.fetch(Some(gate.inputs[1]), 1);
        }
        let out = |p| Some(Wire::Gate(g, p));
        match gate.kind {
            GateKind::And | GateKind::Or => {
                st.w.push(if gate.kind == GateKind::And { Gen::GammaAnd } else { Gen::GammaOr });
                st.slots.remove(1);
                st.slots[0] = out(0);
            }
            GateKind::Not => {
                st.w.push(Gen::GammaNot);
                st.slots[0] = out(0);
            }
            GateKind::Fork => {
                st.w.push(Gen::GammaFork);
                st.slots[0] = out(0);
                st.slots.insert(1, out(1));
            }
            k => unreachable!("{k} survives relabeling"),
        }
        for p in 0..gate.kind.arity().1 {
            if dangling.contains(&Wire::Gate(g, p)) {
                st.absorb(Wire::Gate(g, p));
            }
        }
    }
    let outputs = s.outputs().to_vec();
    if st.junk {
        st.fetch(None, 0);
        for g in [Gen::GammaFork, Gen::GammaNot, Gen::GammaAnd] {
            st.w.push(g);
        }
        st.fetch(Some(outputs[0]), 1);
        st.w.push(Gen::GammaOr);
        st.slots.remove(1);
        st.slots[0] = Some(outputs[0]);
    }
    for (k, &o) in outputs.iter().enumerate() {
        st.fetch(Some(o), k);
    }
    debug_assert_eq!(st.slots, outputs.iter().map(|&o| Some(o)).collect::<Vec<_>>());
    Ok(CompileReport::new(st.w.0, source_size))
}

/// Bits a token reads and its change in length, for Γ_lep ∪ τ tokens.
fn lep_token_shape(g: &Gen) -> Result<(usize, isize)> {
    Ok(match g {
        Gen::GammaAnd | Gen::GammaOr => (2, -1),
        Gen::GammaNot => (1, 0),
        Gen::GammaFork => (1, 1),
        g => match g.tau_indices() {
            Some((i, j)) if i >= 1 && i < j => (j, 0),
            Some((i, j)) => return Err(Error::BadTauIndex(i, j)),
            None => return Err(Error::NotLep(g.to_string())),
        },
    })
}

/// Least input width on which every token of a Γ_lep ∪ τ word is defined.
pub fn lep_word_width(w: &[Gen]) -> Result<usize> {
    let mut offset = 0isize;
    let mut need = 0isize;
    for g in w {
        let (reads, delta) = lep_token_shape(g)?;
        need = need.max(reads as isize - offset);
        offset += delta;
    }
    Ok(need.max(0) as usize)
}

/// Circuit for a word over Γ_lep ∪ τ: each γ becomes its gate and each τ a
/// SWAP. The width is the least one on which the word is defined.
pub fn lep_word_to_circuit(w: &[Gen]) -> Result<Circuit> {
    lep_word_to_circuit_at(w, lep_word_width(w)?)
}

/// As [`lep_word_to_circuit`] at a given input width, which must be large
/// enough for every token.
pub fn lep_word_to_circuit_at(w: &[Gen], width: usize) -> Result<Circuit> {
    let need = lep_word_width(w)?;
    if width < need {
        return Err(Error::LengthMismatch { expected: need, got: width });
    }
    let mut c = Circuit::new(width);
    let mut slots: Vec<Wire> = (0..width).map(Wire::In).collect();
    for g in w {
        match g {
            Gen::GammaAnd | Gen::GammaOr => {
                let kind = if *g == Gen::GammaAnd { GateKind::And } else { GateKind::Or };
                let o = c.add1(kind, vec![slots[0], slots[1]])?;
                slots.remove(1);
                slots[0] = o;
            }
            Gen::GammaNot => slots[0] = c.add1(GateKind::Not, vec![slots[0]])?,
            Gen::GammaFork => {
                let o = c.add_gate(GateKind::Fork, vec![slots[0]])?;
                slots[0] = o[0];
                slots.insert(1, o[1]);
            }
            g => {
                let (i, j) = g.tau_indices().expect("checked by lep_word_width");
                let o = c.add_gate(GateKind::Swap, vec![slots[i - 1], slots[j - 1]])?;
                slots[i - 1] = o[0];
                slots[j - 1] = o[1];
            }
        }
    }
    c.set_outputs(slots)?;
    Ok(c)
}

// ---------------------------------------------------------------------------
// normalization of mixed words with a lep composite

#[derive(Clone, Debug)]
pub struct NormalizeReport {
    pub report: CompileReport,
    /// Width of the uniform input code the stages are built on.
    pub input_width: usize,
    /// Width of the padded representation before each token and at the end.
    pub stage_widths: Vec<usize>,
    /// ℓ of each factor of the directly composable chain.
    pub chain_ell: Vec<usize>,
}

/// Applies every token in sequence to every word of length `m`, returning
/// the lengths of the intermediate words, or `None` if some application is
/// undefined.
fn trajectory_widths(w: &[Gen], tables: &[Element], m: usize) -> Option<Vec<usize>> {
    let mut widths = vec![0; w.len() + 1];
    widths[0] = m;
    for x in all_words(2, m) {
        let mut cur = x;
        for (i, (g, t)) in w.iter().zip(tables).enumerate() {
            cur = match g.tau_indices() {
                Some((a, b)) if cur.len() >= b => {
                    let mut v = cur.into_letters();
                    v.swap(a - 1, b - 1);
                    Word::from_letters(v)
                }
                Some(_) => return None,
                None => t.apply(&cur)?,
            };
            widths[i + 1] = widths[i + 1].max(cur.len());
        }
    }
    Some(widths)
}

/// Stage circuit `{0,1}^w_in → {0,1}^w_out` acting like `alpha` on
/// left-aligned, zero-padded words. The key matching the front of the input
/// selects both the new prefix and the shift of the remaining letters.
fn padded_stage_circuit(alpha: &Table, w_in: usize, w_out: usize) -> Result<Circuit> {
    if w_in == 0 {
        return Err(Error::EmptyInput);
    }
    let mut b = FanoutBuilder::new(w_in);
    let mut keys = Vec::new();
    for (p, q) in alpha.entries() {
        if p.len() > w_in {
            continue;
        }
        let lits: Vec<_> = p
            .letters()
            .iter()
            .enumerate()
            .map(|(t, &bit)| {
                let x = b.input(t);
                if bit == 1 {
                    x
                } else {
                    b.not(x)
                }
            })
            .collect();
        let hit = b.and_all(&lits);
        keys.push((p.len(), q.letters().to_vec(), hit));
    }
    let mut outs = Vec::with_capacity(w_out);
    for j in 0..w_out {
        let mut terms = Vec::new();
        for (plen, q, hit) in &keys {
            if j < q.len() {
                if q[j] == 1 {
                    terms.push(*hit);
                }
            } else {
                let src = j + plen - q.len();
                if src < w_in {
                    let x = b.input(src);
                    terms.push(b.and(*hit, x));
                }
            }
        }
        outs.push(b.or_all(&terms));
    }
    Ok(b.finish(&outs))
}

/// Rewrites a word over the full catalog whose composite is lep into an
/// equal word over Γ_lep ∪ τ.
///
/// Intermediate words are carried left-aligned and padded with zeros to the
/// largest length they reach; lep tokens act on that representation
/// unchanged, any other token is replaced by the lep stage circuit above,
/// compiled with [`circuit_to_lep_word`].
pub fn lep_normalize(w: &[Gen]) -> Result<NormalizeReport> {
    let e = eval_word(w)?;
    if e.is_empty() {
        return Err(Error::EmptyComposite);
    }
    if !e.flags().is_lep {
        return Err(Error::NotLep(e.to_string()));
    }
    let tables: Vec<Element> = w.iter().map(gen_table).collect::<Result<_>>()?;
    let chain_ell = if tables.is_empty() {
        Vec::new()
    } else {
        let raw: Vec<Table> = tables.iter().map(|t| t.table().clone()).collect();
        direct_composable_chain(&raw)?.iter().map(Table::ell).collect()
    };
    let cap = 20;
    let mut m = e.max_key_len();
    let widths = loop {
        if let Some(ws) = trajectory_widths(w, &tables, m) {
            break ws;
        }
        m += 1;
        if m > cap {
            return Err(Error::CapExceeded { needed: m, cap });
        }
    };
    let mut out = Vec::new();
    for (i, g) in w.iter().enumerate() {
        let direct = match g {
            Gen::GammaAnd | Gen::GammaOr | Gen::GammaNot | Gen::GammaFork | Gen::Tau(..) => Some(g.clone()),
            Gen::N | Gen::PhiNot => Some(Gen::GammaNot),
            Gen::Inv(x) if matches!(**x, Gen::N | Gen::PhiNot | Gen::GammaNot) => Some(Gen::GammaNot),
            Gen::Inv(x) if matches!(**x, Gen::Tau(..)) => Some((**x).clone()),
            _ => None,
        };
        match direct {
            Some(t) => out.push(t),
            None => {
                let stage = padded_stage_circuit(tables[i].table(), widths[i], widths[i + 1])?;
                out.extend(circuit_to_lep_word(&stage)?.word);
            }
        }
    }
    Ok(NormalizeReport { report: CompileReport::new(out, w.len()), input_width: m, stage_widths: widths, chain_ell })
}

// ---------------------------------------------------------------------------
// circuits to group words

/// Appends the gadget word of a gate slice: `0 x s ↦ 0 y x s`.
fn emit_units(units: &[Unit], w: &mut WordBuf) {
    let Some((last, rest)) = units.split_last() else {
        return;
    };
    let m: usize = rest.iter().map(|u| u.arity().0).sum();
    let n: usize = rest.iter().map(|u| u.arity().1).sum();
    match last {
        Unit::Id | Unit::Gate(GateKind::Not) => {
            w.push(Gen::Sigma);
            w.tau(3, m + 3);
            w.push(Gen::PhiOr);
            if *last != Unit::Id {
                w.push(Gen::PhiNot);
            }
            w.tau(3, m + 3);
            w.mv(1, m + 2);
            emit_units(rest, w);
            w.mv(n + m + 2, n + 2);
        }
        Unit::Gate(k @ (GateKind::And | GateKind::Or)) => {
            w.push(Gen::Sigma);
            w.tau(2, m + 3);
            w.tau(3, m + 4);
            w.push(if *k == GateKind::And { Gen::PhiAnd } else { Gen::PhiOr });
            w.tau(3, m + 4);
            w.tau(2, m + 3);
            w.mv(1, m + 2);
            emit_units(rest, w);
            w.mv(n + m + 2, n + 2);
        }
        Unit::Gate(GateKind::Fork) => {
            w.push(Gen::Sigma);
            w.push(Gen::Sigma);
            w.tau(3, m + 4);
            w.push(Gen::PhiOr);
            w.tau(1, m + 4);
            w.push(Gen::PhiOr);
            w.mv(1, m + 3);
            w.mv(2, m + 2);
            emit_units(rest, w);
            w.mv(n + m + 2, n + 2);
            w.mv(n + m + 3, n + 3);
        }
        Unit::Gate(k) => unreachable!("{k} does not occur in layered slices"),
    }
}

fn emit_slice(s: &Slice, w: &mut WordBuf) {
    match s {
        Slice::Gates(units) => emit_units(units, w),
        Slice::Crossing(perm) => {
            emit_units(&vec![Unit::Id; perm.len()], w);
            for (i, _) in adjacent_swaps_for(perm) {
                w.tau(i + 2, i + 3);
            }
        }
    }
}

/// Word of a compiled circuit together with the layering it came from.
#[derive(Clone, Debug)]
pub struct WfTrace {
    pub report: CompileReport,
    pub m: usize,
    pub slices: Vec<Slice>,
    /// Word length after the gadget of each slice.
    pub slice_ends: Vec<usize>,
}

/// Group word `W_f` with `0x ↦ 0 f(x) x` for a desugared circuit.
pub fn compile_wf(c: &Circuit) -> Result<CompileReport> {
    Ok(compile_wf_traced(c)?.report)
}

pub fn compile_wf_traced(c: &Circuit) -> Result<WfTrace> {
    let source_size = c.size();
    let lay = layerize(c)?;
    let m = lay.m;
    let mut slices = lay.slices;
    if slices.is_empty() {
        slices.push(Slice::Gates(vec![Unit::Id; m]));
    }
    let mut w = WordBuf::default();
    let mut ends = Vec::with_capacity(slices.len());
    for s in &slices {
        emit_slice(s, &mut w);
        ends.push(w.len());
    }
    let n = slices.last().map_or(m, Slice::width_out);
    let total: usize = m + slices.iter().map(Slice::width_out).sum::<usize>();
    for k in 0..n {
        w.mv(n + 1 - k, total + 1 - k);
    }
    if slices.len() >= 2 {
        for g in word_inverse(&w.0[..ends[slices.len() - 2]])? {
            w.push(g);
        }
    }
    for k in 0..n {
        w.mv(m + 2 + k, 2 + k);
    }
    Ok(WfTrace { report: CompileReport::new(w.0, source_size), m, slices, slice_ends: ends })
}

/// The partial identity `{0 → 0}`.
pub fn zero_half_identity() -> Element {
    reduce(&Table::from_pairs(2, &[("0", "0")]))
}

/// Element of `w` restricted to the ideal `0A*`.
pub fn eval_word_zero_half(w: &[Gen]) -> Result<Element> {
    eval_word_from(&zero_half_identity(), w)
}

fn flagged(bits: &[u8]) -> Word {
    let mut v = Vec::with_capacity(bits.len() + 1);
    v.push(0);
    v.extend_from_slice(bits);
    Word::from_letters(v)
}

/// Exhaustive check of `0x ↦ 0 f(x) x` on the restricted element.
pub fn check_wf_contract(c: &Circuit, w: &[Gen]) -> Result<bool> {
    let e = eval_word_zero_half(w)?;
    Ok(all_words(2, c.m()).into_iter().all(|x| {
        let mut want = c.eval_bits(x.letters());
        want.extend_from_slice(x.letters());
        e.apply(&flagged(x.letters())) == Some(flagged(&want))
    }))
}

/// Checks that after the gadget of slice `l` the flag is followed by the
/// stacked slice outputs `y_l … y_1 x`, for every input `x`.
pub fn check_wf_stacking(t: &WfTrace) -> Result<bool> {
    let mut e = zero_half_identity();
    let mut start = 0;
    let inputs = all_words(2, t.m);
    let mut stacks: Vec<Vec<u8>> = inputs.iter().map(|x| x.letters().to_vec()).collect();
    let mut tops: Vec<Vec<u8>> = stacks.clone();
    for (s, &end) in t.slices.iter().zip(&t.slice_ends) {
        e = eval_word_from(&e, &t.report.word[start..end])?;
        start = end;
        for (stack, top) in stacks.iter_mut().zip(tops.iter_mut()) {
            *top = s.eval(top);
            let mut next = top.clone();
            next.extend_from_slice(stack);
            *stack = next;
        }
        for (x, stack) in inputs.iter().zip(&stacks) {
            if e.apply(&flagged(x.letters())) != Some(flagged(stack)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// reversible pairs

/// Group word mapping `0x ↦ 0 g(x)` for a bijection given with its inverse.
pub fn compile_pair(g: &Circuit, ginv: &Circuit) -> Result<CompileReport> {
    let m = g.m();
    if g.n() != m || ginv.m() != m || ginv.n() != m {
        return Err(Error::NotInversePair(format!(
            "shapes {}->{} and {}->{}",
            g.m(),
            g.n(),
            ginv.m(),
            ginv.n()
        )));
    }
    if m > PAIR_WIDTH_CAP {
        return Err(Error::CapExceeded { needed: m, cap: PAIR_WIDTH_CAP });
    }
    for x in 0..(1u64 << m) {
        if ginv.eval_u64(g.eval_u64(x)) != x || g.eval_u64(ginv.eval_u64(x)) != x {
            return Err(Error::NotInversePair(format!("fails at {}", Word::from_u64(x, m))));
        }
    }
    let wg = compile_wf(&desugar(g))?.word;
    let wi = compile_wf(&desugar(ginv))?.word;
    let mut w = WordBuf(wg);
    for k in 0..m {
        w.mv(m + 2 + k, 2 + k);
    }
    w.0.extend(word_inverse(&wi)?);
    Ok(CompileReport::new(w.0, g.size() + ginv.size()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::eval_lep_word_uniform;
    use crate::sample::random_circuit;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn and_circuit() -> Circuit {
        Circuit::parse("circuit inputs=2 outputs=1\nw1 = AND in1 in2\noutputs w1\n").unwrap()
    }

    fn logic() -> Vec<GateKind> {
        vec![GateKind::And, GateKind::Or, GateKind::Not, GateKind::Fork, GateKind::Id, GateKind::Swap]
    }

    #[test]
    fn lep_word_of_and() {
        let r = circuit_to_lep_word(&and_circuit()).unwrap();
        assert_eq!(r.word, vec![Gen::GammaAnd]);
        let back = lep_word_to_circuit(&r.word).unwrap();
        assert_eq!(back.truth_table(), and_circuit().truth_table());
        let swap = lep_word_to_circuit(&[Gen::Tau(1, 2)]).unwrap();
        assert_eq!(swap.gates().len(), 1);
        assert_eq!(swap.gates()[0].kind, GateKind::Swap);
    }

    #[test]
    fn lep_word_of_empty_and_bad_shapes() {
        let empty = Circuit::parse("circuit inputs=0 outputs=0\noutputs\n").unwrap();
        assert!(circuit_to_lep_word(&empty).unwrap().word.is_empty());
        let sink = Circuit::parse("circuit inputs=1 outputs=0\noutputs\n").unwrap();
        assert_eq!(circuit_to_lep_word(&sink), Err(Error::EmptyInput));
        assert!(matches!(lep_word_to_circuit(&[Gen::Sigma]), Err(Error::NotLep(_))));
        assert_eq!(
            lep_word_to_circuit_at(&[Gen::GammaAnd], 1),
            Err(Error::LengthMismatch { expected: 2, got: 1 })
        );
    }

    #[test]
    fn lep_word_matches_circuit_function() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..200 {
            let m = rng.gen_range(1..=4);
            let gates = rng.gen_range(1..=12);
            let c = random_circuit(&mut rng, m, gates, &logic(), 3);
            let r = circuit_to_lep_word(&c).unwrap();
            let e = eval_lep_word_uniform(&r.word, c.m()).unwrap().expect("defined on {0,1}^m");
            for x in all_words(2, c.m()) {
                assert_eq!(e.apply(&x).unwrap().letters(), c.eval_bits(x.letters()).as_slice());
            }
            let back = lep_word_to_circuit_at(&r.word, c.m()).unwrap();
            assert_eq!(back.truth_table(), c.truth_table());
        }
    }

    #[test]
    fn normalize_keeps_lep_words() {
        let w = vec![Gen::GammaFork, Gen::GammaAnd];
        let r = lep_normalize(&w).unwrap();
        assert_eq!(r.report.word, w);
        assert!(eval_word(&r.report.word).unwrap().is_identity());
    }

    #[test]
    fn normalize_mixed_words() {
        let words = [
            "sigma inv(sigma)",
            "phi_or gamma_and",
            "sigma gamma_and gamma_or",
            "tau12_0 phi_and gamma_fork",
            "inv(sigma) phi_not sigma",
            "sigma phi_or inv(sigma) gamma_or",
            "sigma tau(2,3) inv(sigma)",
        ];
        let toks = [
            Gen::Sigma,
            Gen::sigma_inv(),
            Gen::PhiOr,
            Gen::PhiAnd,
            Gen::Tau12_0,
            Gen::GammaAnd,
            Gen::GammaFork,
            Gen::Tau(1, 3),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut cases: Vec<Vec<Gen>> = words.iter().map(|t| parse_word(t).unwrap()).collect();
        cases.extend((0..60).map(|_| crate::sample::random_gen_word(&mut rng, &toks, 5)));
        let mut done = 0;
        for w in cases {
            let text = crate::generators::format_word(&w);
            let e = eval_word(&w).unwrap();
            if !e.flags().is_lep {
                assert!(matches!(lep_normalize(&w), Err(Error::NotLep(_))));
                continue;
            }
            done += 1;
            let r = lep_normalize(&w).unwrap();
            for g in &r.report.word {
                assert!(lep_token_shape(g).is_ok(), "{g} in {text}");
            }
            let width = lep_word_width(&r.report.word).unwrap().max(r.input_width);
            let got = eval_lep_word_uniform(&r.report.word, width).unwrap().unwrap();
            assert_eq!(got, e, "{text}");
            assert!(r.chain_ell.len() == w.len());
        }
        assert!(done >= 10, "{done}");
        assert!(matches!(lep_normalize(&[Gen::Sigma]), Err(Error::NotLep(_))));
    }

    #[test]
    fn wf_and_example() {
        let r = compile_wf(&and_circuit()).unwrap();
        assert!(check_wf_contract(&and_circuit(), &r.word).unwrap());
        let e = eval_word_zero_half(&r.word).unwrap();
        assert_eq!(e.apply(&Word::parse("011", 2).unwrap()), Some(Word::parse("0111", 2).unwrap()));
        assert!(r.max_tau <= and_circuit().size().pow(2) + 2);
    }

    #[test]
    fn wf_single_gates() {
        for text in [
            "circuit inputs=1 outputs=1\nw1 = NOT in1\noutputs w1\n",
            "circuit inputs=1 outputs=2\nw1 w2 = FORK in1\noutputs w1 w2\n",
            "circuit inputs=2 outputs=1\nw1 = OR in1 in2\noutputs w1\n",
            "circuit inputs=2 outputs=2\noutputs in2 in1\n",
            "circuit inputs=1 outputs=1\noutputs in1\n",
        ] {
            let c = Circuit::parse(text).unwrap();
            let t = compile_wf_traced(&c).unwrap();
            assert!(check_wf_contract(&c, &t.report.word).unwrap(), "{text}");
            assert!(check_wf_stacking(&t).unwrap(), "{text}");
        }
        let sugar = Circuit::parse("circuit inputs=2 outputs=1\nw1 = XOR in1 in2\noutputs w1\n").unwrap();
        assert!(matches!(compile_wf(&sugar), Err(Error::NotDesugared(_))));
    }

    #[test]
    fn wf_random_circuits() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..25 {
            let m = rng.gen_range(1..=3);
            let gates = rng.gen_range(1..=7);
            let c = random_circuit(&mut rng, m, gates, &logic(), 3);
            let t = compile_wf_traced(&c).unwrap();
            assert!(check_wf_contract(&c, &t.report.word).unwrap(), "{c}");
            assert!(check_wf_stacking(&t).unwrap(), "{c}");
            assert!(t.report.max_tau <= c.size().pow(2) + 2);
        }
    }

    #[test]
    fn pair_for_a_swap() {
        let g = Circuit::parse("circuit inputs=2 outputs=2\nw1 w2 = CNOT in1 in2\noutputs w1 w2\n").unwrap();
        let r = compile_pair(&g, &g).unwrap();
        let e = eval_word_zero_half(&r.word).unwrap();
        let tt = g.truth_table();
        for x in 0..4u64 {
            let got = e.apply(&flagged(Word::from_u64(x, 2).letters())).unwrap();
            assert_eq!(got, flagged(Word::from_u64(tt.eval(x), 2).letters()));
        }
        let not = Circuit::parse("circuit inputs=2 outputs=2\nw1 = NOT in1\noutputs w1 in2\n").unwrap();
        assert!(matches!(compile_pair(&g, &not), Err(Error::NotInversePair(_))));
    }
}
