//! Fundamental-group presentations of chainmail surgeries and weight-one
//! certificates.
//!
//! Vertex `k` (declaration order) gives generator `x{k+1}`. The relator of
//! `v` is `x_v^{e(v)}` followed by one factor `(x_u⁻¹ x_v)^{μ(e)}` per edge
//! `e = {v, u}`, where `e(v) = −w(v) − Σ μ(e)`. Edge factors follow the
//! rotation system when there is one, and the target vertex order otherwise.
//! The exponent matrix of these relators is `−A`.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use num_integer::Integer;

use crate::graph::ChainmailGraph;
use crate::linalg::{smith_normal_form, IntMatrix, SnfDiagonal};

/// A freely reduced word; each letter is `(generator index, ±1)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct GroupWord {
    letters: Vec<(usize, i8)>,
}

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord::default()
    }

    pub fn from_letters<I: IntoIterator<Item = (usize, i8)>>(letters: I) -> Self {
        let mut w = GroupWord::default();
        for (g, e) in letters {
            assert!(e == 1 || e == -1, "letters carry exponent ±1");
            w.push(g, e);
        }
        w
    }

    pub fn power(generator: usize, exponent: i64) -> Self {
        let e = if exponent < 0 { -1 } else { 1 };
        GroupWord { letters: vec![(generator, e); exponent.unsigned_abs() as usize] }
    }

    fn push(&mut self, g: usize, e: i8) {
        if self.letters.last() == Some(&(g, -e)) {
            self.letters.pop();
        } else {
            self.letters.push((g, e));
        }
    }

    pub fn letters(&self) -> &[(usize, i8)] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn mul(&self, other: &GroupWord) -> GroupWord {
        let mut w = self.clone();
        for &(g, e) in &other.letters {
            w.push(g, e);
        }
        w
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord { letters: self.letters.iter().rev().map(|&(g, e)| (g, -e)).collect() }
    }

    pub fn pow(&self, k: i64) -> GroupWord {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        (0..k.unsigned_abs()).fold(GroupWord::identity(), |acc, _| acc.mul(&base))
    }

    pub fn exponent_sum(&self, g: usize) -> i64 {
        self.letters.iter().filter(|l| l.0 == g).map(|l| l.1 as i64).sum()
    }

    pub fn occurrences(&self, g: usize) -> usize {
        self.letters.iter().filter(|l| l.0 == g).count()
    }

    pub fn generators(&self) -> BTreeSet<usize> {
        self.letters.iter().map(|l| l.0).collect()
    }

    /// Replaces every letter of generator `g` by `word` (inverted for `g⁻¹`).
    pub fn substitute(&self, g: usize, word: &GroupWord) -> GroupWord {
        let inv = word.inverse();
        let mut out = GroupWord::identity();
        for &(h, e) in &self.letters {
            if h == g {
                out = out.mul(if e > 0 { word } else { &inv });
            } else {
                out.push(h, e);
            }
        }
        out
    }

    /// Deletes every letter of `g`, that is sets `g = 1`.
    pub fn kill(&self, g: usize) -> GroupWord {
        GroupWord::from_letters(self.letters.iter().copied().filter(|l| l.0 != g))
    }

    /// Renders with runs collapsed, e.g. `x1^3 x2^-1 x1`; the identity is `1`.
    pub fn render(&self, names: &[String]) -> String {
        if self.letters.is_empty() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.letters.len() {
            let (g, e) = self.letters[i];
            let mut j = i;
            while j < self.letters.len() && self.letters[j] == (g, e) {
                j += 1;
            }
            let k = (j - i) as i64 * e as i64;
            parts.push(if k == 1 { names[g].clone() } else { format!("{}^{k}", names[g]) });
            i = j;
        }
        parts.join(" ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<GroupWord>,
}

impl GroupPresentation {
    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    /// Relator exponent sums, one row per relator.
    pub fn exponent_matrix(&self) -> Vec<Vec<i64>> {
        self.relators
            .iter()
            .map(|r| (0..self.generators.len()).map(|g| r.exponent_sum(g)).collect())
            .collect()
    }
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "generators: {}", self.generators.join(", "))?;
        writeln!(f, "relators:")?;
        for (k, r) in self.relators.iter().enumerate() {
            writeln!(f, "  r{} = {}", k + 1, r.render(&self.generators))?;
        }
        Ok(())
    }
}

/// How a negative edge enters the relator. Only positive edges occur in the
/// verified example, so both choices are experimental for mixed signs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum NegativeEdgeConvention {
    /// `(x_u⁻¹ x_v)⁻¹ = x_v⁻¹ x_u`.
    #[default]
    InverseFactor,
    /// `x_u x_v⁻¹`.
    Swapped,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PresentationOptions {
    pub negative_edges: NegativeEdgeConvention,
}

pub fn generator_name(k: usize) -> String {
    format!("x{}", k + 1)
}

pub fn presentation_from_graph(g: &ChainmailGraph) -> GroupPresentation {
    presentation_with(g, PresentationOptions::default())
}

pub fn presentation_with(g: &ChainmailGraph, options: PresentationOptions) -> GroupPresentation {
    let n = g.vertex_count();
    let relators = (0..n)
        .map(|v| {
            let mut r = GroupWord::power(v, -g.weight(v) - g.incident_sign_sum(v));
            for k in g.incident_edges(v) {
                let e = g.edges()[k];
                let u = e.other(v);
                let factor = if e.sign.value() > 0 {
                    GroupWord::from_letters([(u, -1), (v, 1)])
                } else {
                    match options.negative_edges {
                        NegativeEdgeConvention::InverseFactor => GroupWord::from_letters([(v, -1), (u, 1)]),
                        NegativeEdgeConvention::Swapped => GroupWord::from_letters([(u, 1), (v, -1)]),
                    }
                };
                r = r.mul(&factor);
            }
            r
        })
        .collect();
    GroupPresentation { generators: (0..n).map(generator_name).collect(), relators }
}

pub fn abelianization(p: &GroupPresentation) -> SnfDiagonal {
    let rows = p.exponent_matrix();
    let m = IntMatrix::from_rows_with_cols(
        rows.iter().map(|r| r.iter().map(|&x| x.into()).collect()).collect(),
        p.generators.len(),
    )
    .expect("rows have one entry per generator");
    // Relators beyond the generator count add no factors; fewer relators
    // leave free summands.
    smith_normal_form(&m).padded(p.generators.len())
}

/// One Tietze elimination: `generator = solution`, read off `relator_word`
/// (the relator `relator` as it stood when the round began).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Elimination {
    pub round: usize,
    pub generator: usize,
    pub solution: GroupWord,
    pub relator: usize,
    pub relator_word: GroupWord,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Simplification {
    pub killed: usize,
    /// Relators after all substitutions, indexed as in the input; `None` for
    /// relators consumed by an elimination.
    pub relators: Vec<Option<GroupWord>>,
    pub survivors: Vec<usize>,
    pub log: Vec<Elimination>,
}

impl Simplification {
    /// The simplified presentation on the surviving generators.
    pub fn presentation(&self, original: &GroupPresentation) -> GroupPresentation {
        let mut map = vec![usize::MAX; original.generators.len()];
        for (k, &g) in self.survivors.iter().enumerate() {
            map[g] = k;
        }
        GroupPresentation {
            generators: self.survivors.iter().map(|&g| original.generators[g].clone()).collect(),
            relators: self
                .relators
                .iter()
                .flatten()
                .map(|r| GroupWord::from_letters(r.letters().iter().map(|&(g, e)| (map[g], e))))
                .collect(),
        }
    }
}

/// Solves `r = A g^ε B` for `g`.
fn solve_for(r: &GroupWord, g: usize) -> GroupWord {
    let at = r.letters().iter().position(|l| l.0 == g).expect("generator occurs");
    let a = GroupWord::from_letters(r.letters()[..at].iter().copied());
    let b = GroupWord::from_letters(r.letters()[at + 1..].iter().copied());
    if r.letters()[at].1 > 0 {
        a.inverse().mul(&b.inverse())
    } else {
        b.mul(&a)
    }
}

/// Sets `g0 = 1`, then eliminates in rounds. Within a round relators are
/// scanned in order and, inside each, generators in index order; a generator
/// occurring exactly once is solved for unless it was already eliminated or
/// used by a solution this round, or its solution mentions a generator
/// eliminated this round. Each relator yields at most one elimination per
/// round. All solutions are substituted at the end of the round.
pub fn kill_generator_and_simplify(p: &GroupPresentation, g0: usize) -> Simplification {
    let mut relators: Vec<Option<GroupWord>> = p.relators.iter().map(|r| Some(r.kill(g0))).collect();
    let mut alive: BTreeSet<usize> = (0..p.generators.len()).filter(|&g| g != g0).collect();
    let mut log = Vec::new();
    let mut round = 0;
    loop {
        round += 1;
        let mut eliminated: BTreeSet<usize> = BTreeSet::new();
        let mut used: BTreeSet<usize> = BTreeSet::new();
        let mut step = Vec::new();
        for (i, r) in relators.iter().enumerate() {
            let Some(r) = r else { continue };
            for &g in &alive {
                if r.occurrences(g) != 1 || eliminated.contains(&g) || used.contains(&g) {
                    continue;
                }
                let solution = solve_for(r, g);
                let involved = solution.generators();
                if involved.iter().any(|h| eliminated.contains(h)) {
                    continue;
                }
                eliminated.insert(g);
                used.extend(involved);
                step.push(Elimination { round, generator: g, solution, relator: i, relator_word: r.clone() });
                break;
            }
        }
        if step.is_empty() {
            break;
        }
        for e in &step {
            relators[e.relator] = None;
            alive.remove(&e.generator);
        }
        for r in relators.iter_mut().flatten() {
            for e in &step {
                *r = r.substitute(e.generator, &e.solution);
            }
        }
        log.extend(step);
    }
    Simplification { killed: g0, relators, survivors: alive.into_iter().collect(), log }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Inconclusive(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightOneCertificate {
    pub presentation: GroupPresentation,
    pub killed_generator: String,
    pub elimination_log: Vec<Elimination>,
    pub survivors: Vec<String>,
    /// Exponent of the survivor in each remaining relator, in relator order.
    pub final_exponents: Vec<i64>,
    pub gcd: u64,
    pub verdict: Verdict,
}

impl WeightOneCertificate {
    pub fn is_valid(&self) -> bool {
        self.verdict == Verdict::Valid
    }

    pub fn render(&self) -> String {
        let names = &self.presentation.generators;
        let mut out = String::new();
        writeln!(out, "kill: {}", self.killed_generator).unwrap();
        writeln!(out, "eliminations:").unwrap();
        if self.elimination_log.is_empty() {
            writeln!(out, "  (none)").unwrap();
        }
        for e in &self.elimination_log {
            writeln!(
                out,
                "  round {}: {} = {}  from r{}: {} = 1",
                e.round,
                names[e.generator],
                e.solution.render(names),
                e.relator + 1,
                e.relator_word.render(names)
            )
            .unwrap();
        }
        let exps: Vec<String> = self.final_exponents.iter().map(|e| e.to_string()).collect();
        writeln!(out, "survivors: {}", if self.survivors.is_empty() { "(none)".to_string() } else { self.survivors.join(", ") })
            .unwrap();
        writeln!(out, "final exponents: {{{}}}", exps.join(", ")).unwrap();
        writeln!(out, "gcd: {}", self.gcd).unwrap();
        match &self.verdict {
            Verdict::Valid => writeln!(out, "verdict: valid (normal closure of {} is the whole group)", self.killed_generator),
            Verdict::Inconclusive(why) => writeln!(out, "verdict: inconclusive ({why})"),
        }
        .unwrap();
        out
    }
}

/// Kills `g0` and simplifies. Valid when one generator survives with
/// exponent gcd 1, or when nothing survives (gcd taken as 1).
pub fn weight_one_certificate(p: &GroupPresentation, g0: usize) -> WeightOneCertificate {
    let s = kill_generator_and_simplify(p, g0);
    let remaining: Vec<&GroupWord> = s.relators.iter().flatten().collect();
    let (final_exponents, gcd, verdict) = match s.survivors.as_slice() {
        [] => (remaining.iter().map(|_| 0).collect(), 1, Verdict::Valid),
        [x] => {
            let exps: Vec<i64> = remaining.iter().map(|r| r.exponent_sum(*x)).collect();
            let gcd = exps.iter().fold(0u64, |acc, &e| acc.gcd(&e.unsigned_abs()));
            let verdict = if gcd == 1 {
                Verdict::Valid
            } else {
                Verdict::Inconclusive(match gcd {
                    0 => "quotient is infinite cyclic".to_string(),
                    d => format!("quotient is cyclic of order {d}"),
                })
            };
            (exps, gcd, verdict)
        }
        many => (
            Vec::new(),
            0,
            Verdict::Inconclusive(format!("{} generators survive simplification", many.len())),
        ),
    };
    WeightOneCertificate {
        presentation: p.clone(),
        killed_generator: p.generators[g0].clone(),
        elimination_log: s.log,
        survivors: s.survivors.iter().map(|&g| p.generators[g].clone()).collect(),
        final_exponents,
        gcd,
        verdict,
    }
}
