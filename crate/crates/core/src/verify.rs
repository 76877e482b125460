//! Seeded property sweeps, one suite per module. A suite fails iff one of its
//! checks fails.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuits::{desugar, layerize, pad_permutation, toffoli_repr, GateKind, TruthTable, REVERSIBLE_WIRE_CAP};
use crate::codes::{classify_code, ideal_intersection, words_up_to, CodeClass, PrefixCode};
use crate::compiler::{
    check_wf_contract, circuit_to_lep_word, compile_wf, lep_normalize, lep_word_to_circuit_at,
};
use crate::error::{Error, Result};
use crate::generators::{apply_word, eval_lep_word_uniform, eval_word, gamma_g_set, gen_table, tau0_expand, word_inverse, Gen};
use crate::metrics::{
    all_permutations, cayley_ball, cayley_symmetry_pairs, composition_violations, distortion_of, min_circuit_size_with,
    parse_ball_dump, wordlength_asym_profile, BallOptions,
};
use crate::par::{self, Exec};
use crate::sample::{random_circuit, random_closed_circuit, random_gen_word, random_group_element, random_maximal_code, random_table};
use crate::thompson::{compose, embed0, invert, reduce, Element};

pub const SUITES: [&str; 6] = ["codes", "thompson", "generators", "circuits", "compiler", "metrics"];

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, pass: bool, detail: impl Into<String>) -> Check {
        Check { name: name.into(), pass, detail: detail.into() }
    }

    /// Counts failures among `n` seeded trials.
    fn trials(name: &str, n: usize, failures: usize) -> Check {
        Check::new(name, failures == 0, format!("{} of {n} failed", failures))
    }
}

pub fn run_suite(name: &str, seed: u64, exec: Exec) -> Result<Vec<Check>> {
    match name {
        "codes" => Ok(codes(seed, exec)),
        "thompson" => thompson(seed, exec),
        "generators" => generators(seed),
        "circuits" => circuits(seed, exec),
        "compiler" => compiler(seed),
        "metrics" => metrics(seed, exec),
        _ => Err(Error::Parse(format!("unknown suite `{name}`; expected one of {}", SUITES.join(", ")))),
    }
}

/// Failures of `pred` over `n` seeded trials; trial `i` gets its own rng.
fn sweep(exec: Exec, seed: u64, n: usize, pred: impl Fn(&mut ChaCha8Rng) -> bool + Sync + Send) -> usize {
    par::map_range(exec, n, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(1_000_003).wrapping_add(i as u64));
        !pred(&mut rng)
    })
    .into_iter()
    .filter(|&bad| bad)
    .count()
}

fn codes(seed: u64, exec: Exec) -> Vec<Check> {
    let n = 300;
    let inter = sweep(exec, seed, n, |rng| {
        let p = random_maximal_code(rng, 2, 5, 6);
        let q = random_maximal_code(rng, 2, 5, 6);
        let r = ideal_intersection(&p, &q);
        // pairwise oracle: longer word of each comparable pair
        let mut want = Vec::new();
        for a in p.words() {
            for b in q.words() {
                if a.is_prefix_of(b) {
                    want.push(b.clone());
                } else if b.is_prefix_of(a) {
                    want.push(a.clone());
                }
            }
        }
        PrefixCode::new(2, want).map(|w| w == r).unwrap_or(false) && ideal_intersection(&q, &p) == r
    });
    let kraft = sweep(exec, seed ^ 1, n, |rng| {
        let splits = rng.gen_range(0..6);
        let p = random_maximal_code(rng, 2, 5, splits);
        let one = num::BigRational::from_integer(1.into());
        p.is_maximal() && p.kraft() == one && classify_code(p.words(), 2) == CodeClass::Code { maximal: true }
    });
    vec![Check::trials("ideal intersection matches pairwise oracle", n, inter), Check::trials("maximal codes have Kraft sum 1", n, kraft)]
}

fn thompson(seed: u64, exec: Exec) -> Result<Vec<Check>> {
    let n = 300;
    let assoc = sweep(exec, seed, n, |rng| {
        let [a, b, c] = [0, 1, 2].map(|_| reduce(&random_table(rng, 2, 3, true)));
        let l = compose(&compose(&c, &b).unwrap(), &a).unwrap();
        let r = compose(&c, &compose(&b, &a).unwrap()).unwrap();
        l == r
    });
    let idem = sweep(exec, seed ^ 2, n, |rng| {
        let e = reduce(&random_table(rng, 2, 4, true));
        reduce(e.table()) == e
    });
    let group = sweep(exec, seed ^ 3, n, |rng| {
        let g = random_group_element(rng, 4);
        let gi = invert(&g).unwrap();
        g.flags().in_g && compose(&gi, &g).unwrap().is_identity() && invert(&gi).unwrap() == g
    });
    let apply = sweep(exec, seed ^ 4, 100, |rng| {
        let a = reduce(&random_table(rng, 2, 3, true));
        let b = reduce(&random_table(rng, 2, 3, true));
        let ab = compose(&b, &a).unwrap();
        words_up_to(2, 7).iter().all(|x| match a.apply(x).and_then(|y| b.apply(&y)) {
            Some(z) => ab.apply(x) == Some(z),
            None => true,
        })
    });
    Ok(vec![
        Check::trials("compose is associative", n, assoc),
        Check::trials("reduce is idempotent", n, idem),
        Check::trials("group laws on random group elements", n, group),
        Check::trials("composite agrees with sequential application", 100, apply),
    ])
}

fn generators(seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut toks = gamma_g_set();
    toks.extend([Gen::Tau(1, 2), Gen::Tau(2, 3)]);
    let mut bad = 0;
    for _ in 0..100 {
        let len = rng.gen_range(0..=6);
        let w = random_gen_word(&mut rng, &toks, len);
        let mut ww = w.clone();
        ww.extend(word_inverse(&w)?);
        bad += usize::from(!eval_word(&ww)?.is_identity());
    }
    let mut tau0 = 0;
    for j in 2..=5 {
        for i in 1..j {
            let lhs = eval_word(&tau0_expand(i, j)?)?;
            tau0 += usize::from(lhs != embed0(&gen_table(&Gen::Tau(i, j))?)?);
        }
    }
    let mut app = 0;
    for _ in 0..50 {
        let w = random_gen_word(&mut rng, &toks, 4);
        let e = eval_word(&w)?;
        for x in words_up_to(2, 6) {
            if let Some(y) = apply_word(&w, &x)? {
                app += usize::from(e.apply(&x) != Some(y));
            }
        }
    }
    Ok(vec![
        Check::trials("word times its inverse is the identity", 100, bad),
        Check::trials("conjugated tau12_0 equals embed0(tau)", 10, tau0),
        Check::new("apply_word agrees with eval_word", app == 0, format!("{app} disagreements")),
    ])
}

fn logic_kinds() -> Vec<GateKind> {
    vec![GateKind::And, GateKind::Or, GateKind::Not, GateKind::Fork, GateKind::Id, GateKind::Swap]
}

fn circuits(seed: u64, exec: Exec) -> Result<Vec<Check>> {
    let n = 100;
    let mut all = logic_kinds();
    all.extend([GateKind::Xor, GateKind::Cnot, GateKind::Ccnot]);
    let des = sweep(exec, seed, n, |rng| {
        let m = rng.gen_range(1..=4);
        let g = rng.gen_range(1..=10);
        let c = random_circuit(rng, m, g, &all, 3);
        let d = desugar(&c);
        d.is_desugared() && d.truth_table() == c.truth_table()
    });
    let lay = sweep(exec, seed ^ 5, n, |rng| {
        let m = rng.gen_range(1..=4);
        let g = rng.gen_range(1..=10);
        let c = random_circuit(rng, m, g, &logic_kinds(), 3);
        match layerize(&c) {
            Ok(l) => (0..1u64 << m).all(|x| {
                let bits = crate::codes::Word::from_u64(x, m);
                l.eval_bits(bits.letters()) == c.eval_bits(bits.letters())
            }),
            Err(_) => false,
        }
    });
    let tof = sweep(exec, seed ^ 6, 50, |rng| {
        let (m, k) = (rng.gen_range(1..=3), rng.gen_range(1..=2));
        let rows: Vec<u64> = (0..1u64 << m).map(|_| rng.gen_range(0..1u64 << k)).collect();
        let f = TruthTable::new(m, k, rows).unwrap();
        match toffoli_repr(&f, REVERSIBLE_WIRE_CAP) {
            Ok(c) => c.truth_table().is_bijective() && (0..1u64 << m).all(|x| c.eval_u64(x << k) == (f.eval(x) << m) | x),
            Err(_) => false,
        }
    });
    let pad = all_permutations(2)
        .iter()
        .filter(|f| {
            let p = pad_permutation(f, 4).unwrap();
            !(p.is_bijective() && (0..16).all(|x| p.eval(x) & 3 == x & 3))
        })
        .count();
    Ok(vec![
        Check::trials("desugar preserves the function", n, des),
        Check::trials("layering preserves the function", n, lay),
        Check::trials("Toffoli representation contract", 50, tof),
        Check::trials("padded permutations fix the trailing wires", 24, pad),
    ])
}

fn compiler(seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut lep, mut wf) = (0, 0);
    for _ in 0..40 {
        let m = rng.gen_range(1..=4);
        let g = rng.gen_range(1..=10);
        let c = random_circuit(&mut rng, m, g, &logic_kinds(), 3);
        let w = circuit_to_lep_word(&c)?.word;
        lep += usize::from(lep_word_to_circuit_at(&w, m)?.truth_table() != c.truth_table());
        let c = random_closed_circuit(&mut rng, m, g, &logic_kinds());
        let r = compile_wf(&c)?;
        wf += usize::from(!check_wf_contract(&c, &r.word)? || r.max_tau > c.size().pow(2) + 2);
    }
    let toks = [Gen::Sigma, Gen::sigma_inv(), Gen::PhiOr, Gen::Tau12_0, Gen::GammaAnd, Gen::GammaFork, Gen::Tau(1, 3)];
    let (mut tried, mut norm) = (0, 0);
    while tried < 20 {
        let w = random_gen_word(&mut rng, &toks, 5);
        let e = eval_word(&w)?;
        if e.is_empty() || !e.flags().is_lep {
            continue;
        }
        tried += 1;
        let r = lep_normalize(&w)?;
        let width = r.input_width.max(crate::compiler::lep_word_width(&r.report.word)?);
        norm += usize::from(eval_lep_word_uniform(&r.report.word, width)?.as_ref() != Some(&e));
    }
    Ok(vec![
        Check::trials("circuit to lep word and back preserves the function", 40, lep),
        Check::trials("W_f contract and tau bound", 40, wf),
        Check::trials("lep normalization preserves the element", 20, norm),
    ])
}

fn metrics(seed: u64, exec: Exec) -> Result<Vec<Check>> {
    let opts = BallOptions { exec, ..Default::default() };
    let gens = [Gen::Sigma, Gen::sigma_inv(), Gen::PhiNot, Gen::PhiOr, Gen::Tau(1, 2)];
    let ball = cayley_ball(&gens, 3, opts)?;
    let mut parents = 0;
    for i in 1..ball.len() {
        let (p, g) = ball.parent(i).expect("non-root");
        let ok = ball.distances()[i] == ball.distances()[p] + 1
            && crate::generators::act(&gens[g], &ball.elements()[p])? == ball.elements()[i];
        parents += usize::from(!ok);
    }
    let dump = parse_ball_dump(&ball.dump())?;
    let roundtrip = dump.len() == ball.len() && dump.iter().all(|(d, e)| ball.distance(e) == Some(*d));
    let sym = cayley_symmetry_pairs(&ball, opts)?;
    let sym_bad = sym.iter().filter(|(a, b)| Some(*a) != *b).count();
    let taus = cayley_ball(&[Gen::Tau(1, 2), Gen::Tau(2, 3)], 4, opts)?;
    let lam = wordlength_asym_profile(&taus);
    let lam_ok = lam.values.iter().enumerate().all(|(n, &v)| v <= n);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut comp = 0;
    for _ in 0..100 {
        let l3: Vec<usize> = (0..50).map(|_| rng.gen_range(0..6)).collect();
        let l2: Vec<usize> = l3.iter().map(|&x| x + rng.gen_range(0..3)).collect();
        let l1: Vec<usize> = l2.iter().map(|&x| x + rng.gen_range(0..3)).collect();
        let dom: Vec<usize> = (0..50).collect();
        let d = |a: &[usize], b: &[usize]| distortion_of(|&i: &usize| Some(a[i]), |&i: &usize| Some(b[i]), &dom);
        comp += usize::from(!composition_violations(&d(&l1, &l3)?, &d(&l1, &l2)?, &d(&l2, &l3)?).is_empty());
    }

    let small = [GateKind::And, GateKind::Or, GateKind::Not, GateKind::Fork];
    let mut big = small.to_vec();
    big.push(GateKind::Xor);
    let perms = all_permutations(2);
    let mono = par::map(exec, &perms, |f| {
        let a = min_circuit_size_with(f, &small, 9, Exec::Sequential).map(|c| c.size);
        let b = min_circuit_size_with(f, &big, 9, Exec::Sequential).map(|c| c.size);
        match (a, b) {
            (Some(a), Some(b)) => b <= a,
            (None, _) => true,
            (Some(_), None) => false,
        }
    })
    .into_iter()
    .filter(|ok| !ok)
    .count();
    let id: Element = Element::identity(2);
    Ok(vec![
        Check::trials("BFS parent edges add exactly one", ball.len(), parents),
        Check::new("ball dump round-trips", roundtrip, format!("{} elements", ball.len())),
        Check::new("d(1, g^-1) = d(g, 1)", sym_bad == 0, format!("{} pairs, {sym_bad} mismatches", sym.len())),
        Check::new("involutive generators give lambda(n) <= n", lam_ok, lam.to_csv().replace('\n', " ")),
        Check::new("identity at distance 0", ball.distance(&id) == Some(0), ""),
        Check::trials("distortion composition on random triples", 100, comp),
        Check::trials("circuit size monotone under basis growth (cap 9)", 24, mono),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass() {
        for s in SUITES {
            let checks = run_suite(s, 7, Exec::Auto).unwrap();
            for c in &checks {
                assert!(c.pass, "{s}: {} ({})", c.name, c.detail);
            }
        }
        assert!(run_suite("nope", 0, Exec::Auto).is_err());
    }
}
