//! Seeded random instances for tests, sweeps and benches.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::circuits::{Circuit, GateKind, Wire};
use crate::codes::{PrefixCode, Word};
use crate::generators::Gen;
use crate::thompson::{reduce, Element, Table};

/// Random maximal prefix code grown by splitting leaves shorter than `max_len`.
pub fn random_maximal_code(rng: &mut impl Rng, k: u8, max_len: usize, splits: usize) -> PrefixCode {
    let mut leaves = vec![Word::empty()];
    for _ in 0..splits {
        let open: Vec<usize> = (0..leaves.len()).filter(|&i| leaves[i].len() < max_len).collect();
        let Some(&i) = open.choose(rng) else { break };
        let w = leaves.swap_remove(i);
        leaves.extend((0..k).map(|a| w.child(a)));
    }
    PrefixCode::new(k, leaves).expect("split leaves form a code")
}

fn random_word(rng: &mut impl Rng, k: u8, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    Word::from_letters((0..len).map(|_| rng.gen_range(0..k)).collect())
}

/// Random table with keys of length ≤ `max_len`. With `partial`, some
/// entries are dropped so the domain need not be maximal.
pub fn random_table(rng: &mut impl Rng, k: u8, max_len: usize, partial: bool) -> Table {
    let splits = rng.gen_range(0..=(1usize << max_len.min(4)));
    let code = random_maximal_code(rng, k, max_len, splits);
    let mut entries: Vec<(Word, Word)> = Vec::new();
    for x in code.words() {
        if !partial || rng.gen_bool(0.8) {
            entries.push((x.clone(), random_word(rng, k, max_len)));
        }
    }
    Table::new(k, entries).expect("keys form a code")
}

/// Random element of the group: a bijection between two maximal codes of
/// equal size. Binary codes with the same number of splits have equal size.
pub fn random_group_element(rng: &mut impl Rng, max_len: usize) -> Element {
    loop {
        let splits = rng.gen_range(0..=(1usize << max_len.min(3)));
        let p = random_maximal_code(rng, 2, max_len, splits);
        let q = random_maximal_code(rng, 2, max_len, splits);
        if p.len() != q.len() {
            continue;
        }
        let mut imgs = q.words().to_vec();
        imgs.shuffle(rng);
        let t = Table::new(2, p.words().iter().cloned().zip(imgs)).expect("keys form a code");
        return reduce(&t);
    }
}

/// Random circuit on `m` inputs over the gate kinds given, with about
/// `gates` gates, each wire consumed at most once. Unused wires may be
/// outputs or left dangling.
pub fn random_circuit(rng: &mut impl Rng, m: usize, gates: usize, kinds: &[GateKind], max_out: usize) -> Circuit {
    let mut c = Circuit::new(m);
    let mut free: Vec<Wire> = (0..m).map(Wire::In).collect();
    for _ in 0..gates {
        let usable: Vec<GateKind> = kinds.iter().copied().filter(|k| k.arity().0 <= free.len()).collect();
        let Some(&kind) = usable.choose(rng) else { break };
        let mut ins = Vec::new();
        for _ in 0..kind.arity().0 {
            let i = rng.gen_range(0..free.len());
            ins.push(free.swap_remove(i));
        }
        let outs = c.add_gate(kind, ins).expect("fresh wires");
        free.extend(outs);
    }
    free.shuffle(rng);
    let n = rng.gen_range(1..=free.len().clamp(1, max_out));
    free.truncate(n.min(free.len()));
    c.set_outputs(free).expect("unused wires");
    c
}

/// Like [`random_circuit`] but with no dangling wires: every wire left
/// unconsumed becomes an output.
pub fn random_closed_circuit(rng: &mut impl Rng, m: usize, gates: usize, kinds: &[GateKind]) -> Circuit {
    let mut c = Circuit::new(m);
    let mut free: Vec<Wire> = (0..m).map(Wire::In).collect();
    for _ in 0..gates {
        let usable: Vec<GateKind> = kinds.iter().copied().filter(|k| k.arity().0 <= free.len()).collect();
        let Some(&kind) = usable.choose(rng) else { break };
        let mut ins = Vec::new();
        for _ in 0..kind.arity().0 {
            let i = rng.gen_range(0..free.len());
            ins.push(free.swap_remove(i));
        }
        let outs = c.add_gate(kind, ins).expect("fresh wires");
        free.extend(outs);
    }
    free.shuffle(rng);
    c.set_outputs(free).expect("unused wires");
    c
}

/// Random word over the given tokens.
pub fn random_gen_word(rng: &mut impl Rng, tokens: &[Gen], len: usize) -> Vec<Gen> {
    (0..len).map(|_| tokens.choose(rng).expect("nonempty token set").clone()).collect()
}
