//! Combinational circuits: netlist IR, evaluation, strict layering, and the
//! reversible syntheses over {NOT, CNOT, CCNOT, SWAP}.
//!
//! Every wire is consumed at most once; fan-out goes through FORK. Wires that
//! are neither consumed nor outputs are allowed and simply dropped.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::codes::Word;
use crate::error::{Error, Result};

/// Default cap on the wire count of reversible syntheses.
pub const REVERSIBLE_WIRE_CAP: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    And,
    Or,
    Not,
    Xor,
    Fork,
    Id,
    Swap,
    Cnot,
    Ccnot,
}

impl GateKind {
    pub const ALL: [GateKind; 9] = [
        GateKind::And,
        GateKind::Or,
        GateKind::Not,
        GateKind::Xor,
        GateKind::Fork,
        GateKind::Id,
        GateKind::Swap,
        GateKind::Cnot,
        GateKind::Ccnot,
    ];

    /// (inputs, outputs)
    pub fn arity(self) -> (usize, usize) {
        match self {
            GateKind::And | GateKind::Or | GateKind::Xor => (2, 1),
            GateKind::Not | GateKind::Id => (1, 1),
            GateKind::Fork => (1, 2),
            GateKind::Swap | GateKind::Cnot => (2, 2),
            GateKind::Ccnot => (3, 3),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::And => "AND",
            GateKind::Or => "OR",
            GateKind::Not => "NOT",
            GateKind::Xor => "XOR",
            GateKind::Fork => "FORK",
            GateKind::Id => "ID",
            GateKind::Swap => "SWAP",
            GateKind::Cnot => "CNOT",
            GateKind::Ccnot => "CCNOT",
        }
    }

    pub fn parse(s: &str) -> Option<GateKind> {
        GateKind::ALL.into_iter().find(|k| k.name().eq_ignore_ascii_case(s))
    }

    pub fn is_sugar(self) -> bool {
        matches!(self, GateKind::Xor | GateKind::Cnot | GateKind::Ccnot)
    }

    pub fn is_reversible(self) -> bool {
        matches!(self, GateKind::Not | GateKind::Id | GateKind::Swap | GateKind::Cnot | GateKind::Ccnot)
    }

    /// Gate semantics on single bits. Works bitwise on packed truth vectors
    /// too, given the all-ones mask for NOT.
    pub fn eval_packed(self, a: &[u64], mask: u64) -> [u64; 3] {
        match self {
            GateKind::And => [a[0] & a[1], 0, 0],
            GateKind::Or => [a[0] | a[1], 0, 0],
            GateKind::Not => [!a[0] & mask, 0, 0],
            GateKind::Xor => [a[0] ^ a[1], 0, 0],
            GateKind::Fork => [a[0], a[0], 0],
            GateKind::Id => [a[0], 0, 0],
            GateKind::Swap => [a[1], a[0], 0],
            GateKind::Cnot => [a[0], a[0] ^ a[1], 0],
            GateKind::Ccnot => [a[0], a[1], a[2] ^ (a[0] & a[1])],
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Input port `In(i)` (0-based) or output `port` of gate number `g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Wire {
    In(usize),
    Gate(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gate {
    pub kind: GateKind,
    pub inputs: Vec<Wire>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    m: usize,
    gates: Vec<Gate>,
    outputs: Vec<Wire>,
    consumed: BTreeSet<Wire>,
}

impl Circuit {
    pub fn new(m: usize) -> Circuit {
        Circuit { m, gates: Vec::new(), outputs: Vec::new(), consumed: BTreeSet::new() }
    }

    fn exists(&self, w: Wire) -> bool {
        match w {
            Wire::In(i) => i < self.m,
            Wire::Gate(g, p) => g < self.gates.len() && p < self.gates[g].kind.arity().1,
        }
    }

    fn check_fresh(&self, ws: &[Wire]) -> Result<()> {
        let mut seen = BTreeSet::new();
        for &w in ws {
            if !self.exists(w) {
                return Err(Error::Parse(format!("wire {w:?} does not exist")));
            }
            if self.consumed.contains(&w) || !seen.insert(w) {
                return Err(Error::Parse(format!("wire {w:?} is consumed twice")));
            }
        }
        Ok(())
    }

    pub fn add_gate(&mut self, kind: GateKind, inputs: Vec<Wire>) -> Result<Vec<Wire>> {
        if inputs.len() != kind.arity().0 {
            return Err(Error::Parse(format!("{kind} takes {} inputs", kind.arity().0)));
        }
        self.check_fresh(&inputs)?;
        self.consumed.extend(inputs.iter().copied());
        let g = self.gates.len();
        self.gates.push(Gate { kind, inputs });
        Ok((0..kind.arity().1).map(|p| Wire::Gate(g, p)).collect())
    }

    /// Adds a single-output gate and returns its wire.
    pub fn add1(&mut self, kind: GateKind, inputs: Vec<Wire>) -> Result<Wire> {
        Ok(self.add_gate(kind, inputs)?[0])
    }

    pub fn set_outputs(&mut self, outputs: Vec<Wire>) -> Result<()> {
        self.check_fresh(&outputs)?;
        self.outputs = outputs;
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.outputs.len()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn outputs(&self) -> &[Wire] {
        &self.outputs
    }

    pub fn size(&self) -> usize {
        circuit_size(self)
    }

    pub fn is_desugared(&self) -> bool {
        self.gates.iter().all(|g| !g.kind.is_sugar())
    }

    /// Gates other than ID and SWAP.
    pub fn logic_gate_count(&self) -> usize {
        self.gates.iter().filter(|g| !matches!(g.kind, GateKind::Id | GateKind::Swap)).count()
    }

    /// Wires that are neither consumed nor outputs.
    pub fn dangling(&self) -> Vec<Wire> {
        let outs: BTreeSet<Wire> = self.outputs.iter().copied().collect();
        let all = (0..self.m).map(Wire::In).chain(
            self.gates.iter().enumerate().flat_map(|(g, gate)| (0..gate.kind.arity().1).map(move |p| Wire::Gate(g, p))),
        );
        all.filter(|w| !self.consumed.contains(w) && !outs.contains(w)).collect()
    }

    /// Evaluates on packed values: each wire carries a `u64` and gates act
    /// bitwise, so 64 inputs can be evaluated at once.
    pub fn eval_packed(&self, inputs: &[u64], mask: u64) -> Vec<u64> {
        let mut vals: Vec<[u64; 3]> = Vec::with_capacity(self.gates.len());
        let get = |vals: &Vec<[u64; 3]>, w: Wire| match w {
            Wire::In(i) => inputs[i],
            Wire::Gate(g, p) => vals[g][p],
        };
        let mut buf = [0u64; 3];
        for gate in &self.gates {
            for (i, &w) in gate.inputs.iter().enumerate() {
                buf[i] = get(&vals, w);
            }
            vals.push(gate.kind.eval_packed(&buf[..gate.inputs.len()], mask));
        }
        self.outputs.iter().map(|&w| get(&vals, w)).collect()
    }

    /// Input and output packed most significant bit first.
    pub fn eval_u64(&self, x: u64) -> u64 {
        let ins: Vec<u64> = (0..self.m).map(|i| (x >> (self.m - 1 - i)) & 1).collect();
        self.eval_packed(&ins, 1).iter().fold(0, |acc, &b| (acc << 1) | b)
    }

    pub fn eval_bits(&self, x: &[u8]) -> Vec<u8> {
        let ins: Vec<u64> = x.iter().map(|&b| b as u64).collect();
        self.eval_packed(&ins, 1).iter().map(|&b| b as u8).collect()
    }

    pub fn truth_table(&self) -> TruthTable {
        assert!(self.m <= 24 && self.n() <= 64, "truth table too large");
        TruthTable { m: self.m, n: self.n(), rows: (0..1u64 << self.m).map(|x| self.eval_u64(x)).collect() }
    }

    pub fn parse(text: &str) -> Result<Circuit> {
        let mut lines = text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty circuit file".into()))?;
        let mut m = None;
        let mut n = None;
        let mut parts = header.split_whitespace();
        if parts.next() != Some("circuit") {
            return Err(Error::Parse(format!("bad circuit header `{header}`")));
        }
        for p in parts {
            let (k, v) = p.split_once('=').ok_or_else(|| Error::Parse(format!("bad header field `{p}`")))?;
            let v: usize = v.parse().map_err(|_| Error::Parse(format!("bad header field `{p}`")))?;
            match k {
                "inputs" => m = Some(v),
                "outputs" => n = Some(v),
                _ => return Err(Error::Parse(format!("bad header field `{p}`"))),
            }
        }
        let (m, n) = m.zip(n).ok_or_else(|| Error::Parse("header needs inputs= and outputs=".into()))?;
        let mut c = Circuit::new(m);
        let mut names: BTreeMap<String, Wire> = BTreeMap::new();
        let resolve = |names: &BTreeMap<String, Wire>, a: &str| -> Result<Wire> {
            if let Some(i) = a.strip_prefix("in") {
                let i: usize = i.parse().map_err(|_| Error::Parse(format!("bad wire `{a}`")))?;
                if i == 0 || i > m {
                    return Err(Error::Parse(format!("input `{a}` out of range")));
                }
                return Ok(Wire::In(i - 1));
            }
            names.get(a).copied().ok_or_else(|| Error::Parse(format!("unknown wire `{a}`")))
        };
        let mut saw_outputs = false;
        for l in lines {
            if let Some(rest) = l.strip_prefix("outputs") {
                let outs = rest.split_whitespace().map(|a| resolve(&names, a)).collect::<Result<Vec<_>>>()?;
                if outs.len() != n {
                    return Err(Error::Parse(format!("expected {n} outputs, got {}", outs.len())));
                }
                c.set_outputs(outs)?;
                saw_outputs = true;
                continue;
            }
            let (lhs, rhs) = l.split_once('=').ok_or_else(|| Error::Parse(format!("bad circuit line `{l}`")))?;
            let lhs: Vec<&str> = lhs.split_whitespace().collect();
            let mut rhs = rhs.split_whitespace();
            let kind_s = rhs.next().ok_or_else(|| Error::Parse(format!("missing gate in `{l}`")))?;
            let kind = GateKind::parse(kind_s).ok_or_else(|| Error::Parse(format!("unknown gate `{kind_s}`")))?;
            let args = rhs.map(|a| resolve(&names, a)).collect::<Result<Vec<_>>>()?;
            if lhs.len() != kind.arity().1 {
                return Err(Error::Parse(format!("{kind} has {} outputs", kind.arity().1)));
            }
            let outs = c.add_gate(kind, args)?;
            for (name, w) in lhs.into_iter().zip(outs) {
                if !name.starts_with('w') || names.insert(name.to_string(), w).is_some() {
                    return Err(Error::Parse(format!("bad or repeated wire name `{name}`")));
                }
            }
        }
        if !saw_outputs && n > 0 {
            return Err(Error::Parse("missing outputs line".into()));
        }
        Ok(c)
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "circuit inputs={} outputs={}", self.m, self.n())?;
        let mut ids: BTreeMap<Wire, usize> = BTreeMap::new();
        let name = |ids: &BTreeMap<Wire, usize>, w: Wire| match w {
            Wire::In(i) => format!("in{}", i + 1),
            Wire::Gate(..) => format!("w{}", ids[&w]),
        };
        for (g, gate) in self.gates.iter().enumerate() {
            let mut lhs = Vec::new();
            for p in 0..gate.kind.arity().1 {
                let id = ids.len() + 1;
                ids.insert(Wire::Gate(g, p), id);
                lhs.push(format!("w{id}"));
            }
            let args: Vec<String> = gate.inputs.iter().map(|&w| name(&ids, w)).collect();
            writeln!(f, "{} = {} {}", lhs.join(" "), gate.kind, args.join(" "))?;
        }
        let outs: Vec<String> = self.outputs.iter().map(|&w| name(&ids, w)).collect();
        writeln!(f, "outputs {}", outs.join(" "))
    }
}

/// Gate count plus input and output ports.
pub fn circuit_size(c: &Circuit) -> usize {
    c.gates.len() + c.m + c.outputs.len()
}

pub fn eval_circuit(c: &Circuit, x: &Word) -> Result<Word> {
    if x.len() != c.m {
        return Err(Error::LengthMismatch { expected: c.m, got: x.len() });
    }
    if x.letters().iter().any(|&b| b > 1) {
        return Err(Error::Parse(format!("{x} is not a binary word")));
    }
    Ok(Word::from_letters(c.eval_bits(x.letters())))
}

/// Function {0,1}^m -> {0,1}^n; row `x` holds the output for input `x`,
/// both packed most significant bit first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruthTable {
    m: usize,
    n: usize,
    rows: Vec<u64>,
}

impl TruthTable {
    pub fn new(m: usize, n: usize, rows: Vec<u64>) -> Result<TruthTable> {
        if rows.len() != 1usize << m {
            return Err(Error::LengthMismatch { expected: 1 << m, got: rows.len() });
        }
        if n < 64 && rows.iter().any(|&r| r >> n != 0) {
            return Err(Error::Parse(format!("row wider than {n} bits")));
        }
        Ok(TruthTable { m, n, rows })
    }

    pub fn from_fn(m: usize, n: usize, f: impl Fn(u64) -> u64) -> TruthTable {
        let mask = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
        TruthTable { m, n, rows: (0..1u64 << m).map(|x| f(x) & mask).collect() }
    }

    pub fn identity(m: usize) -> TruthTable {
        TruthTable::from_fn(m, m, |x| x)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.rows[x as usize]
    }

    /// Output bit `j` (0 = first letter) as a column over all inputs.
    pub fn column(&self, j: usize) -> Vec<u8> {
        self.rows.iter().map(|&r| ((r >> (self.n - 1 - j)) & 1) as u8).collect()
    }

    pub fn is_bijective(&self) -> bool {
        if self.m != self.n {
            return false;
        }
        let mut seen = vec![false; self.rows.len()];
        self.rows.iter().all(|&r| !std::mem::replace(&mut seen[r as usize], true))
    }

    pub fn inverse(&self) -> Result<TruthTable> {
        if !self.is_bijective() {
            return Err(Error::NotBijective);
        }
        let mut rows = vec![0; self.rows.len()];
        for (x, &y) in self.rows.iter().enumerate() {
            rows[y as usize] = x as u64;
        }
        Ok(TruthTable { m: self.m, n: self.n, rows })
    }

    pub fn parse(text: &str) -> Result<TruthTable> {
        let mut lines = text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty truth table".into()))?;
        let mut m = None;
        let mut n = None;
        let mut parts = header.split_whitespace();
        if parts.next() != Some("truthtable") {
            return Err(Error::Parse(format!("bad truth table header `{header}`")));
        }
        for p in parts {
            match p.split_once('=') {
                Some(("m", v)) => m = v.parse().ok(),
                Some(("n", v)) => n = v.parse().ok(),
                _ => return Err(Error::Parse(format!("bad header field `{p}`"))),
            }
        }
        let (m, n): (usize, usize) = m.zip(n).ok_or_else(|| Error::Parse("header needs m= and n=".into()))?;
        if m > 24 || n > 64 {
            return Err(Error::Parse("truth table too large".into()));
        }
        let mut rows = vec![None; 1 << m];
        for l in lines {
            let (a, b) = l.split_once("->").ok_or_else(|| Error::Parse(format!("bad row `{l}`")))?;
            let (x, y) = (Word::parse(a, 2)?, Word::parse(b, 2)?);
            if x.len() != m || y.len() != n {
                return Err(Error::Parse(format!("row `{l}` has the wrong widths")));
            }
            rows[x.to_u64() as usize] = Some(y.to_u64());
        }
        let rows = rows.into_iter().collect::<Option<Vec<_>>>().ok_or_else(|| Error::Parse("missing rows".into()))?;
        TruthTable::new(m, n, rows)
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "truthtable m={} n={}", self.m, self.n)?;
        for (x, &y) in self.rows.iter().enumerate() {
            writeln!(f, "{} -> {}", Word::from_u64(x as u64, self.m), Word::from_u64(y, self.n))?;
        }
        Ok(())
    }
}

/// Expands XOR, CNOT and CCNOT over {AND, OR, NOT, FORK}.
/// XOR(a,b) = AND(OR(a,b), NOT(AND(a,b))), with one FORK per operand.
pub fn desugar(c: &Circuit) -> Circuit {
    fn xor(out: &mut Circuit, a: Wire, b: Wire) -> Wire {
        let fa = out.add_gate(GateKind::Fork, vec![a]).unwrap();
        let fb = out.add_gate(GateKind::Fork, vec![b]).unwrap();
        let o = out.add1(GateKind::Or, vec![fa[0], fb[0]]).unwrap();
        let n = out.add1(GateKind::And, vec![fa[1], fb[1]]).unwrap();
        let nn = out.add1(GateKind::Not, vec![n]).unwrap();
        out.add1(GateKind::And, vec![o, nn]).unwrap()
    }
    let mut out = Circuit::new(c.m);
    let mut map: BTreeMap<Wire, Wire> = (0..c.m).map(|i| (Wire::In(i), Wire::In(i))).collect();
    for (g, gate) in c.gates.iter().enumerate() {
        let ins: Vec<Wire> = gate.inputs.iter().map(|w| map[w]).collect();
        let outs: Vec<Wire> = match gate.kind {
            GateKind::Xor => vec![xor(&mut out, ins[0], ins[1])],
            GateKind::Cnot => {
                let f = out.add_gate(GateKind::Fork, vec![ins[0]]).unwrap();
                vec![f[0], xor(&mut out, f[1], ins[1])]
            }
            GateKind::Ccnot => {
                let fa = out.add_gate(GateKind::Fork, vec![ins[0]]).unwrap();
                let fb = out.add_gate(GateKind::Fork, vec![ins[1]]).unwrap();
                let ab = out.add1(GateKind::And, vec![fa[1], fb[1]]).unwrap();
                vec![fa[0], fb[0], xor(&mut out, ab, ins[2])]
            }
            k => out.add_gate(k, ins).unwrap(),
        };
        for (p, w) in outs.into_iter().enumerate() {
            map.insert(Wire::Gate(g, p), w);
        }
    }
    out.set_outputs(c.outputs.iter().map(|w| map[w]).collect()).unwrap();
    out
}

/// One unit of a gate slice. It consumes the next `arity` positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Unit {
    Gate(GateKind),
    Id,
}

impl Unit {
    pub fn arity(self) -> (usize, usize) {
        match self {
            Unit::Gate(k) => k.arity(),
            Unit::Id => (1, 1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Slice {
    /// Units applied to consecutive positions, left to right.
    Gates(Vec<Unit>),
    /// Output position `k` receives input position `perm[k]`.
    Crossing(Vec<usize>),
}

impl Slice {
    pub fn width_in(&self) -> usize {
        match self {
            Slice::Gates(us) => us.iter().map(|u| u.arity().0).sum(),
            Slice::Crossing(p) => p.len(),
        }
    }

    pub fn width_out(&self) -> usize {
        match self {
            Slice::Gates(us) => us.iter().map(|u| u.arity().1).sum(),
            Slice::Crossing(p) => p.len(),
        }
    }

    pub fn eval(&self, x: &[u8]) -> Vec<u8> {
        match self {
            Slice::Crossing(p) => p.iter().map(|&i| x[i]).collect(),
            Slice::Gates(us) => {
                let mut out = Vec::with_capacity(self.width_out());
                let mut i = 0;
                for u in us {
                    let (a, b) = u.arity();
                    let ins: Vec<u64> = x[i..i + a].iter().map(|&v| v as u64).collect();
                    let kind = match u {
                        Unit::Gate(k) => *k,
                        Unit::Id => GateKind::Id,
                    };
                    let r = kind.eval_packed(&ins, 1);
                    out.extend(r[..b].iter().map(|&v| v as u8));
                    i += a;
                }
                out
            }
        }
    }
}

/// A strictly layered circuit: every gate slice reads only the previous
/// slice's outputs, and wire crossings sit in slices of their own.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layered {
    pub m: usize,
    pub slices: Vec<Slice>,
}

impl Layered {
    pub fn n(&self) -> usize {
        self.slices.last().map_or(self.m, Slice::width_out)
    }

    pub fn eval_bits(&self, x: &[u8]) -> Vec<u8> {
        self.slices.iter().fold(x.to_vec(), |v, s| s.eval(&v))
    }

    pub fn id_count(&self) -> usize {
        self.slices
            .iter()
            .map(|s| match s {
                Slice::Gates(us) => us.iter().filter(|u| **u == Unit::Id).count(),
                Slice::Crossing(_) => 0,
            })
            .sum()
    }

    pub fn gate_slices(&self) -> usize {
        self.slices.iter().filter(|s| matches!(s, Slice::Gates(_))).count()
    }

    /// Netlist form; crossings become adjacent SWAP gates.
    pub fn to_circuit(&self) -> Circuit {
        let mut c = Circuit::new(self.m);
        let mut cur: Vec<Wire> = (0..self.m).map(Wire::In).collect();
        for s in &self.slices {
            match s {
                Slice::Gates(us) => {
                    let mut next = Vec::new();
                    let mut i = 0;
                    for u in us {
                        let a = u.arity().0;
                        let kind = match u {
                            Unit::Gate(k) => *k,
                            Unit::Id => GateKind::Id,
                        };
                        next.extend(c.add_gate(kind, cur[i..i + a].to_vec()).unwrap());
                        i += a;
                    }
                    cur = next;
                }
                Slice::Crossing(p) => {
                    for (i, j) in adjacent_swaps_for(p) {
                        let o = c.add_gate(GateKind::Swap, vec![cur[i], cur[j]]).unwrap();
                        cur[i] = o[0];
                        cur[j] = o[1];
                    }
                }
            }
        }
        c.set_outputs(cur).unwrap();
        c
    }
}

/// Adjacent transpositions (0-based positions `(i, i+1)`) that turn the
/// sequence `0..n` into `perm`, where output `k` takes input `perm[k]`.
pub fn adjacent_swaps_for(perm: &[usize]) -> Vec<(usize, usize)> {
    let mut cur: Vec<usize> = (0..perm.len()).collect();
    let mut out = Vec::new();
    for k in 0..perm.len() {
        let mut p = cur.iter().position(|&v| v == perm[k]).expect("perm is a permutation");
        while p > k {
            cur.swap(p - 1, p);
            out.push((p - 1, p));
            p -= 1;
        }
    }
    out
}

/// Same function over {AND, OR, NOT, FORK}: ID and SWAP gates are removed by
/// relabeling wires. Sugar gates are rejected.
pub(crate) fn strip_relabels(c: &Circuit) -> Result<Circuit> {
    if !c.is_desugared() {
        let bad: BTreeSet<&str> = c.gates.iter().filter(|g| g.kind.is_sugar()).map(|g| g.kind.name()).collect();
        return Err(Error::NotDesugared(bad.into_iter().collect::<Vec<_>>().join(",")));
    }
    let mut out = Circuit::new(c.m);
    let mut map: BTreeMap<Wire, Wire> = (0..c.m).map(|i| (Wire::In(i), Wire::In(i))).collect();
    for (g, gate) in c.gates.iter().enumerate() {
        let ins: Vec<Wire> = gate.inputs.iter().map(|w| map[w]).collect();
        let outs = match gate.kind {
            GateKind::Id => ins,
            GateKind::Swap => vec![ins[1], ins[0]],
            k => out.add_gate(k, ins)?,
        };
        for (p, w) in outs.into_iter().enumerate() {
            map.insert(Wire::Gate(g, p), w);
        }
    }
    out.set_outputs(c.outputs.iter().map(|w| map[w]).collect())?;
    Ok(out)
}

/// Circuit over {AND, OR, NOT, FORK}: IDs and SWAPs removed by relabeling and
/// dangling wires folded into the first output through
/// `OR(AND(d, NOT(d)), o)`, after AND-merging them pairwise.
fn normalize_for_layering(c: &Circuit) -> Result<Circuit> {
    let mut out = strip_relabels(c)?;
    let mut outputs = out.outputs.clone();
    let mut dangling = out.dangling();
    if !dangling.is_empty() && !outputs.is_empty() {
        while dangling.len() > 1 {
            let mut next = Vec::new();
            for pair in dangling.chunks(2) {
                if pair.len() == 2 {
                    next.push(out.add1(GateKind::And, vec![pair[0], pair[1]])?);
                } else {
                    next.push(pair[0]);
                }
            }
            dangling = next;
        }
        let f = out.add_gate(GateKind::Fork, vec![dangling[0]])?;
        let nd = out.add1(GateKind::Not, vec![f[1]])?;
        let zero = out.add1(GateKind::And, vec![f[0], nd])?;
        outputs[0] = out.add1(GateKind::Or, vec![outputs[0], zero])?;
        out.outputs.clear();
        out.set_outputs(outputs)?;
    }
    Ok(out)
}

/// Strict layering. Gates sit at their depth; wires that skip levels are
/// carried by ID units; whenever the next slice needs its inputs in another
/// order a pure crossing slice is inserted.
pub fn layerize(c: &Circuit) -> Result<Layered> {
    if c.n() == 0 {
        return Err(Error::EmptyInput);
    }
    let c = normalize_for_layering(c)?;
    let mut depth_of_gate = vec![0usize; c.gates.len()];
    let wire_depth = |d: &Vec<usize>, w: Wire| match w {
        Wire::In(_) => 0,
        Wire::Gate(g, _) => d[g],
    };
    for (g, gate) in c.gates.iter().enumerate() {
        depth_of_gate[g] = 1 + gate.inputs.iter().map(|&w| wire_depth(&depth_of_gate, w)).max().unwrap_or(0);
    }
    let levels = depth_of_gate.iter().copied().max().unwrap_or(0);
    // consumer level of every wire; outputs are consumed after the last level
    let mut consumer: BTreeMap<Wire, usize> = BTreeMap::new();
    for (g, gate) in c.gates.iter().enumerate() {
        for &w in &gate.inputs {
            consumer.insert(w, depth_of_gate[g]);
        }
    }
    for &w in &c.outputs {
        consumer.insert(w, levels + 1);
    }
    let mut slices = Vec::new();
    let mut cur: Vec<Wire> = (0..c.m).map(Wire::In).collect();
    for level in 1..=levels {
        // (sort key, unit, inputs, outputs)
        let mut units: Vec<(usize, Unit, Vec<Wire>, Vec<Wire>)> = Vec::new();
        let pos = |w: &Wire| cur.iter().position(|v| v == w).expect("wire is live");
        for &w in &cur {
            if consumer[&w] > level {
                units.push((pos(&w), Unit::Id, vec![w], vec![w]));
            }
        }
        for (g, gate) in c.gates.iter().enumerate() {
            if depth_of_gate[g] == level {
                let key = gate.inputs.iter().map(pos).min().unwrap();
                let outs = (0..gate.kind.arity().1).map(|p| Wire::Gate(g, p)).collect();
                units.push((key, Unit::Gate(gate.kind), gate.inputs.clone(), outs));
            }
        }
        units.sort_by_key(|u| u.0);
        let need: Vec<Wire> = units.iter().flat_map(|u| u.2.iter().copied()).collect();
        if need != cur {
            slices.push(Slice::Crossing(need.iter().map(pos).collect()));
        }
        slices.push(Slice::Gates(units.iter().map(|u| u.1).collect()));
        cur = units.into_iter().flat_map(|u| u.3).collect();
    }
    if cur != c.outputs {
        let perm = c.outputs.iter().map(|w| cur.iter().position(|v| v == w).expect("output is live")).collect();
        slices.push(Slice::Crossing(perm));
    }
    Ok(Layered { m: c.m, slices })
}

pub fn slice(c: &Circuit) -> Result<Vec<Slice>> {
    Ok(layerize(c)?.slices)
}

/// Builder for reversible circuits on a fixed number of lines.
pub struct RevBuilder {
    c: Circuit,
    lines: Vec<Wire>,
}

impl RevBuilder {
    pub fn new(width: usize) -> RevBuilder {
        RevBuilder { c: Circuit::new(width), lines: (0..width).map(Wire::In).collect() }
    }

    fn gate(&mut self, kind: GateKind, at: &[usize]) {
        let ins = at.iter().map(|&i| self.lines[i]).collect();
        let outs = self.c.add_gate(kind, ins).expect("distinct live lines");
        for (&i, w) in at.iter().zip(outs) {
            self.lines[i] = w;
        }
    }

    pub fn not(&mut self, t: usize) {
        self.gate(GateKind::Not, &[t]);
    }

    pub fn cnot(&mut self, c: usize, t: usize) {
        self.gate(GateKind::Cnot, &[c, t]);
    }

    pub fn ccnot(&mut self, a: usize, b: usize, t: usize) {
        self.gate(GateKind::Ccnot, &[a, b, t]);
    }

    pub fn swap(&mut self, i: usize, j: usize) {
        self.gate(GateKind::Swap, &[i, j]);
    }

    /// `t ^= AND(controls)`, borrowing `free` lines whose values are restored.
    pub fn mct(&mut self, ctrls: &[usize], t: usize, free: &[usize]) {
        let d = ctrls.len();
        match d {
            0 => return self.not(t),
            1 => return self.cnot(ctrls[0], t),
            2 => return self.ccnot(ctrls[0], ctrls[1], t),
            _ => {}
        }
        if free.len() >= d - 2 {
            let a = &free[..d - 2];
            let c = ctrls;
            let ladder_down = |b: &mut RevBuilder| {
                for i in (1..d - 2).rev() {
                    b.ccnot(c[i + 1], a[i - 1], a[i]);
                }
            };
            let ladder_up = |b: &mut RevBuilder| {
                for i in 1..d - 2 {
                    b.ccnot(c[i + 1], a[i - 1], a[i]);
                }
            };
            self.ccnot(c[d - 1], a[d - 3], t);
            ladder_down(self);
            self.ccnot(c[0], c[1], a[0]);
            ladder_up(self);
            self.ccnot(c[d - 1], a[d - 3], t);
            ladder_down(self);
            self.ccnot(c[0], c[1], a[0]);
            ladder_up(self);
            return;
        }
        assert!(!free.is_empty(), "multi-controlled NOT needs a spare line");
        // one spare: t ^= AND(c2)·(a ^ AND(c1)) twice, around a ^= AND(c1)
        let a = free[0];
        let k1 = d.div_ceil(2);
        let (c1, c2) = ctrls.split_at(k1);
        let mut c2a: Vec<usize> = c2.to_vec();
        c2a.push(a);
        let rest: Vec<usize> = free[1..].to_vec();
        let free1: Vec<usize> = c2.iter().copied().chain([t]).chain(rest.iter().copied()).collect();
        let free2: Vec<usize> = c1.iter().copied().chain(rest.iter().copied()).collect();
        self.mct(c1, a, &free1);
        self.mct(&c2a, t, &free2);
        self.mct(c1, a, &free1);
        self.mct(&c2a, t, &free2);
    }

    /// Moves line contents so that line `k` ends up holding what was on
    /// line `order[k]`, using SWAP gates.
    pub fn permute(&mut self, order: &[usize]) {
        let mut cur: Vec<usize> = (0..self.lines.len()).collect();
        for k in 0..order.len() {
            let p = cur.iter().position(|&v| v == order[k]).unwrap();
            if p != k {
                self.swap(k, p);
                cur.swap(k, p);
            }
        }
    }

    pub fn finish(mut self) -> Circuit {
        let outs = self.lines.clone();
        self.c.set_outputs(outs).expect("lines are live");
        self.c
    }
}

/// Node of a [`FanoutBuilder`] netlist.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    In(usize),
    G(usize),
}

/// Netlist builder over single-output AND/OR/NOT nodes in which a node may
/// be used any number of times; `finish` materializes fan-out as FORK chains.
pub struct FanoutBuilder {
    m: usize,
    nodes: Vec<(GateKind, Vec<Node>)>,
    not_cache: BTreeMap<Node, Node>,
    zero: Option<Node>,
}

impl FanoutBuilder {
    pub fn new(m: usize) -> FanoutBuilder {
        FanoutBuilder { m, nodes: Vec::new(), not_cache: BTreeMap::new(), zero: None }
    }

    pub fn input(&self, i: usize) -> Node {
        assert!(i < self.m);
        Node::In(i)
    }

    fn push(&mut self, kind: GateKind, ins: Vec<Node>) -> Node {
        self.nodes.push((kind, ins));
        Node::G(self.nodes.len() - 1)
    }

    pub fn and(&mut self, a: Node, b: Node) -> Node {
        self.push(GateKind::And, vec![a, b])
    }

    pub fn or(&mut self, a: Node, b: Node) -> Node {
        self.push(GateKind::Or, vec![a, b])
    }

    /// Shared negation of a node.
    pub fn not(&mut self, a: Node) -> Node {
        if let Some(&n) = self.not_cache.get(&a) {
            return n;
        }
        let n = self.push(GateKind::Not, vec![a]);
        self.not_cache.insert(a, n);
        n
    }

    /// Constant 0 as `AND(x1, NOT x1)`; needs at least one input.
    pub fn zero(&mut self) -> Node {
        if let Some(z) = self.zero {
            return z;
        }
        let x = self.input(0);
        let nx = self.not(x);
        let z = self.and(x, nx);
        self.zero = Some(z);
        z
    }

    pub fn one(&mut self) -> Node {
        let z = self.zero();
        self.not(z)
    }

    fn fold_balanced(&mut self, xs: &[Node], kind: GateKind) -> Option<Node> {
        let mut layer = xs.to_vec();
        while layer.len() > 1 {
            let mut next = Vec::with_capacity(layer.len().div_ceil(2));
            for pair in layer.chunks(2) {
                next.push(if pair.len() == 2 { self.push(kind, vec![pair[0], pair[1]]) } else { pair[0] });
            }
            layer = next;
        }
        layer.first().copied()
    }

    /// AND of all nodes; the constant 1 for an empty list.
    pub fn and_all(&mut self, xs: &[Node]) -> Node {
        match self.fold_balanced(xs, GateKind::And) {
            Some(n) => n,
            None => self.one(),
        }
    }

    /// OR of all nodes; the constant 0 for an empty list.
    pub fn or_all(&mut self, xs: &[Node]) -> Node {
        match self.fold_balanced(xs, GateKind::Or) {
            Some(n) => n,
            None => self.zero(),
        }
    }

    pub fn finish(self, outputs: &[Node]) -> Circuit {
        let idx = |n: Node, m: usize| match n {
            Node::In(i) => i,
            Node::G(g) => m + g,
        };
        let total = self.m + self.nodes.len();
        let mut uses = vec![0usize; total];
        for (_, ins) in &self.nodes {
            for &n in ins {
                uses[idx(n, self.m)] += 1;
            }
        }
        for &n in outputs {
            uses[idx(n, self.m)] += 1;
        }
        let mut c = Circuit::new(self.m);
        let mut avail: Vec<Option<Wire>> = (0..self.m).map(|i| Some(Wire::In(i))).collect();
        avail.resize(total, None);
        let take = |c: &mut Circuit, avail: &mut Vec<Option<Wire>>, uses: &mut Vec<usize>, i: usize| -> Wire {
            let w = avail[i].expect("node defined before use");
            uses[i] -= 1;
            if uses[i] == 0 {
                return w;
            }
            let f = c.add_gate(GateKind::Fork, vec![w]).expect("fresh wire");
            avail[i] = Some(f[1]);
            f[0]
        };
        for (g, (kind, ins)) in self.nodes.iter().enumerate() {
            if uses[self.m + g] == 0 {
                continue;
            }
            let wires: Vec<Wire> = ins.iter().map(|&n| take(&mut c, &mut avail, &mut uses, idx(n, self.m))).collect();
            avail[self.m + g] = Some(c.add1(*kind, wires).expect("fresh wires"));
        }
        let outs: Vec<Wire> = outputs.iter().map(|&n| take(&mut c, &mut avail, &mut uses, idx(n, self.m))).collect();
        c.set_outputs(outs).expect("fresh wires");
        c
    }
}

/// Algebraic normal form of output bit `j`: monomials as input bit masks,
/// with input position `i` at mask bit `m-1-i`.
fn anf_monomials(f: &TruthTable, j: usize) -> Vec<u64> {
    let mut coef: Vec<u8> = f.column(j);
    let m = f.m();
    for b in 0..m {
        for x in 0..coef.len() {
            if x & (1 << b) != 0 {
                coef[x] ^= coef[x ^ (1 << b)];
            }
        }
    }
    (0..coef.len() as u64).filter(|&x| coef[x as usize] == 1).collect()
}

fn mask_positions(mask: u64, m: usize) -> Vec<usize> {
    (0..m).filter(|&i| mask >> (m - 1 - i) & 1 == 1).collect()
}

/// `t ^= g(x)` for every output bit of `g`, with input lines `xs` and
/// target lines `ts`, all other lines of the builder borrowed as dirty
/// ancillas. Each target must be 0 on entry when its function contains the
/// full monomial and no spare line exists.
fn xor_function_into(b: &mut RevBuilder, g: &TruthTable, xs: &[usize], ts: &[usize], width: usize) {
    let m = g.m();
    for (j, &t) in ts.iter().enumerate() {
        let mut monos = anf_monomials(g, j);
        // the full monomial first, while the target is still clean
        monos.sort_by_key(|&mo| std::cmp::Reverse(mo.count_ones()));
        for mo in monos {
            let ctrls: Vec<usize> = mask_positions(mo, m).into_iter().map(|i| xs[i]).collect();
            let free: Vec<usize> = (0..width).filter(|l| *l != t && !ctrls.contains(l)).collect();
            if ctrls.len() >= 3 && free.is_empty() {
                // clean target: t = c0c1; c0 ^= t·rest; t ^= c0·c1; c0 ^= t
                let (c0, c1) = (ctrls[0], ctrls[1]);
                b.ccnot(c0, c1, t);
                let mut inner = vec![t];
                inner.extend_from_slice(&ctrls[2..]);
                b.mct(&inner, c0, &[c1]);
                b.ccnot(c0, c1, t);
                b.cnot(t, c0);
            } else {
                b.mct(&ctrls, t, &free);
            }
        }
    }
}

/// Reversible circuit on m+n lines with `x·0^n -> f(x)·x`.
pub fn toffoli_repr(f: &TruthTable, cap: usize) -> Result<Circuit> {
    let (m, n) = (f.m(), f.n());
    if m + n > cap {
        return Err(Error::CapExceeded { needed: m + n, cap });
    }
    let width = m + n;
    let mut b = RevBuilder::new(width);
    let xs: Vec<usize> = (0..m).collect();
    let ts: Vec<usize> = (m..width).collect();
    xor_function_into(&mut b, f, &xs, &ts, width);
    let order: Vec<usize> = ts.iter().chain(xs.iter()).copied().collect();
    b.permute(&order);
    Ok(b.finish())
}

/// Reversible circuit on 3m+C lines with `x·1^m·0^(m+C) -> g(x)·¬g(x)·x·0^C`.
pub fn fredkin_perm(g: &TruthTable, scratch: usize, cap: usize) -> Result<Circuit> {
    if !g.is_bijective() {
        return Err(Error::NotBijective);
    }
    let m = g.m();
    let width = 3 * m + scratch;
    if width > cap {
        return Err(Error::CapExceeded { needed: width, cap });
    }
    let mut b = RevBuilder::new(width);
    let a: Vec<usize> = (0..m).collect();
    let ones: Vec<usize> = (m..2 * m).collect();
    let c: Vec<usize> = (2 * m..3 * m).collect();
    xor_function_into(&mut b, g, &a, &c, width);
    for i in 0..m {
        b.swap(a[i], c[i]);
    }
    for i in 0..m {
        b.cnot(a[i], ones[i]);
    }
    Ok(b.finish())
}

/// Reversible circuit on m+n+s lines, s = size of `cf`, with
/// `x·0^(n+s) -> f(x)·x·0^s`: forward simulation of `cf` into scratch
/// lines, CNOT copy of the outputs, then the forward pass undone.
pub fn fredkin_repr(f: &TruthTable, cf: &Circuit, cap: usize) -> Result<Circuit> {
    let (m, n) = (f.m(), f.n());
    if cf.m() != m || cf.n() != n {
        return Err(Error::LengthMismatch { expected: m, got: cf.m() });
    }
    if cf.truth_table() != *f {
        return Err(Error::Parse("circuit does not compute the given function".into()));
    }
    let s = circuit_size(cf);
    let width = m + n + s;
    if width > cap {
        return Err(Error::CapExceeded { needed: width, cap });
    }
    // reversible gate list for the forward pass
    let mut ops: Vec<(GateKind, Vec<usize>)> = Vec::new();
    let mut line: BTreeMap<Wire, usize> = (0..m).map(|i| (Wire::In(i), i)).collect();
    let mut next_scratch = m + n;
    let mut fresh = || {
        let l = next_scratch;
        next_scratch += 1;
        l
    };
    for (g, gate) in cf.gates().iter().enumerate() {
        let ins: Vec<usize> = gate.inputs.iter().map(|w| line[w]).collect();
        let outs: Vec<usize> = match gate.kind {
            GateKind::And => {
                let t = fresh();
                ops.push((GateKind::Ccnot, vec![ins[0], ins[1], t]));
                vec![t]
            }
            GateKind::Or => {
                let t = fresh();
                ops.push((GateKind::Cnot, vec![ins[0], t]));
                ops.push((GateKind::Cnot, vec![ins[1], t]));
                ops.push((GateKind::Ccnot, vec![ins[0], ins[1], t]));
                vec![t]
            }
            GateKind::Xor => {
                let t = fresh();
                ops.push((GateKind::Cnot, vec![ins[0], t]));
                ops.push((GateKind::Cnot, vec![ins[1], t]));
                vec![t]
            }
            GateKind::Not => {
                let t = fresh();
                ops.push((GateKind::Cnot, vec![ins[0], t]));
                ops.push((GateKind::Not, vec![t]));
                vec![t]
            }
            GateKind::Fork => vec![ins[0], ins[0]],
            GateKind::Id => vec![ins[0]],
            GateKind::Swap => vec![ins[1], ins[0]],
            GateKind::Cnot => {
                let t = fresh();
                ops.push((GateKind::Cnot, vec![ins[0], t]));
                ops.push((GateKind::Cnot, vec![ins[1], t]));
                vec![ins[0], t]
            }
            GateKind::Ccnot => {
                let t = fresh();
                ops.push((GateKind::Cnot, vec![ins[2], t]));
                ops.push((GateKind::Ccnot, vec![ins[0], ins[1], t]));
                vec![ins[0], ins[1], t]
            }
        };
        for (p, l) in outs.into_iter().enumerate() {
            line.insert(Wire::Gate(g, p), l);
        }
    }
    let mut b = RevBuilder::new(width);
    let run = |b: &mut RevBuilder, op: &(GateKind, Vec<usize>)| match op.0 {
        GateKind::Not => b.not(op.1[0]),
        GateKind::Cnot => b.cnot(op.1[0], op.1[1]),
        GateKind::Ccnot => b.ccnot(op.1[0], op.1[1], op.1[2]),
        _ => unreachable!(),
    };
    for op in &ops {
        run(&mut b, op);
    }
    for (j, w) in cf.outputs().iter().enumerate() {
        b.cnot(line[w], m + j);
    }
    for op in ops.iter().rev() {
        run(&mut b, op);
    }
    let order: Vec<usize> = (m..m + n).chain(0..m).chain(m + n..width).collect();
    b.permute(&order);
    Ok(b.finish())
}

/// `(x, w) -> (F(x), w)` on `size_cf` bits.
pub fn pad_permutation(f: &TruthTable, size_cf: usize) -> Result<TruthTable> {
    if !f.is_bijective() {
        return Err(Error::NotBijective);
    }
    let m = f.m();
    if size_cf < m {
        return Err(Error::BadSize { size: size_cf, m });
    }
    if size_cf > 24 {
        return Err(Error::CapExceeded { needed: size_cf, cap: 24 });
    }
    let r = size_cf - m;
    Ok(TruthTable::from_fn(size_cf, size_cf, |x| (f.eval(x >> r) << r) | (x & ((1u64 << r) - 1))))
}

/// Circuit for the padded permutation: `cf` plus pass-through wires.
pub fn pad_circuit(cf: &Circuit, size_cf: usize) -> Result<Circuit> {
    let m = cf.m();
    if size_cf < m {
        return Err(Error::BadSize { size: size_cf, m });
    }
    let mut c = Circuit::new(size_cf);
    let mut map: BTreeMap<Wire, Wire> = (0..m).map(|i| (Wire::In(i), Wire::In(i))).collect();
    for (g, gate) in cf.gates().iter().enumerate() {
        let outs = c.add_gate(gate.kind, gate.inputs.iter().map(|w| map[w]).collect())?;
        for (p, w) in outs.into_iter().enumerate() {
            map.insert(Wire::Gate(g, p), w);
        }
    }
    let outs = cf.outputs().iter().map(|w| map[w]).chain((m..size_cf).map(Wire::In)).collect();
    c.set_outputs(outs)?;
    Ok(c)
}
