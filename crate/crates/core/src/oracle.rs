//! Brute-force ground truth built only from channel enumeration and set
//! algebra: ball disjointness, exhaustive decoder checks, containing
//! codewords and the maximum code size at tiny lengths.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::block_codes::{self, BlockCodeSpec};
use crate::channel::{ball, BallSpec, DeletionBudget, ShiftBudget};
use crate::error::{Error, Result};
use crate::lee_codes::{self, LeeCodeSpec};
use crate::list_codes::{self, ListCodeSpec};
use crate::seqcore::{phi, vt_syndrome, BitString};
use crate::shift_codes::{self, ShiftCodeSpec};
use crate::single_codes::{self, SingleCodeSpec};

/// Largest case count an exhaustive run may attempt.
pub const MAX_CASES: u128 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub codeword: BitString,
    pub received: BitString,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub family: String,
    pub params: BTreeMap<String, u64>,
    pub total_cases: u64,
    pub failures: Vec<Counterexample>,
    pub verified: bool,
    pub elapsed_secs: f64,
    /// Largest list returned, for list decoders.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_list_size: Option<usize>,
}

impl VerificationReport {
    fn new(
        family: &str,
        params: BTreeMap<String, u64>,
        total_cases: u64,
        failures: Vec<Counterexample>,
        start: Instant,
    ) -> Self {
        Self {
            family: family.into(),
            params,
            total_cases,
            verified: failures.is_empty(),
            failures,
            elapsed_secs: start.elapsed().as_secs_f64(),
            max_list_size: None,
        }
    }
}

fn union_ball(x: &BitString, specs: &[BallSpec]) -> BTreeSet<BitString> {
    specs.iter().flat_map(|&s| ball(x, s)).collect()
}

/// Balls for one 0-deletion or one transposition.
pub fn single_error_specs() -> [BallSpec; 2] {
    [
        BallSpec::new(DeletionBudget::Zeros(1), ShiftBudget::Any(0)),
        BallSpec::new(DeletionBudget::Zeros(0), ShiftBudget::Any(1)),
    ]
}

/// Pairwise disjointness of the union balls of `code`; each collision is
/// reported with a shared string.
pub fn balls_disjoint(code: &[BitString], specs: &[BallSpec]) -> VerificationReport {
    let start = Instant::now();
    let mut owner: HashMap<BitString, &BitString> = HashMap::new();
    let mut failures = Vec::new();
    let mut cases = 0u64;
    for c in code {
        for y in union_ball(c, specs) {
            cases += 1;
            match owner.get(&y) {
                Some(&other) if other != c => failures.push(Counterexample {
                    codeword: c.clone(),
                    received: y,
                    detail: format!("also reachable from {other}"),
                }),
                Some(_) => {}
                None => {
                    owner.insert(y, c);
                }
            }
        }
    }
    let params = BTreeMap::from([("code_size".to_string(), code.len() as u64)]);
    VerificationReport::new("balls_disjoint", params, cases, failures, start)
}

/// Codewords whose union ball contains `y`.
pub fn find_containing_codewords(
    y: &BitString,
    code: &[BitString],
    specs: &[BallSpec],
) -> BTreeSet<BitString> {
    code.iter()
        .filter(|c| c.len() >= y.len() && union_ball(c, specs).contains(y))
        .cloned()
        .collect()
}

/// A code family with the parameters of an exhaustive run. Every string of
/// length `n` is taken as the transmitted word of the code containing it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilyParams {
    Single { n: usize },
    Shift { n: usize, s_plus: usize, s_minus: usize },
    Lee { n: usize, t: usize, s: usize },
    List { n: usize, t: usize, s_plus: usize, s_minus: usize, p: u64 },
    Block { n: usize, t_b: usize, ell: usize, s: usize },
}

impl FamilyParams {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Single { .. } => "single",
            Self::Shift { .. } => "shift",
            Self::Lee { .. } => "lee",
            Self::List { .. } => "list",
            Self::Block { .. } => "block",
        }
    }

    pub fn n(&self) -> usize {
        match *self {
            Self::Single { n }
            | Self::Shift { n, .. }
            | Self::Lee { n, .. }
            | Self::List { n, .. }
            | Self::Block { n, .. } => n,
        }
    }

    fn params(&self) -> BTreeMap<String, u64> {
        let kv: Vec<(&str, u64)> = match *self {
            Self::Single { n } => vec![("n", n as u64)],
            Self::Shift { n, s_plus, s_minus } => {
                vec![("n", n as u64), ("s_plus", s_plus as u64), ("s_minus", s_minus as u64)]
            }
            Self::Lee { n, t, s } => vec![("n", n as u64), ("t", t as u64), ("s", s as u64)],
            Self::List { n, t, s_plus, s_minus, p } => vec![
                ("n", n as u64),
                ("t", t as u64),
                ("s_plus", s_plus as u64),
                ("s_minus", s_minus as u64),
                ("p", p),
            ],
            Self::Block { n, t_b, ell, s } => vec![
                ("n", n as u64),
                ("t_b", t_b as u64),
                ("ell", ell as u64),
                ("s", s as u64),
            ],
        };
        kv.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }

    /// The channel the family is specified against.
    pub fn ball_specs(&self) -> Vec<BallSpec> {
        match *self {
            Self::Single { .. } => single_error_specs().to_vec(),
            Self::Shift { s_plus, s_minus, .. } => vec![BallSpec::new(
                DeletionBudget::AnyBit(1),
                ShiftBudget::Directed { right: s_plus, left: s_minus },
            )],
            Self::Lee { t, s, .. } => {
                vec![BallSpec::new(DeletionBudget::Zeros(t), ShiftBudget::Any(s))]
            }
            Self::List { t, s_plus, s_minus, .. } => vec![BallSpec::new(
                DeletionBudget::Zeros(t),
                ShiftBudget::Directed { right: s_plus, left: s_minus },
            )],
            Self::Block { t_b, ell, s, .. } => vec![BallSpec::new(
                DeletionBudget::Blocks { t_b, ell },
                ShiftBudget::Any(s),
            )],
        }
    }

    /// Upper estimate of the case count, `2^n C(n+d, d) C(n+s, s)` for `d`
    /// deletion events and `s` transpositions.
    pub fn estimated_cases(&self) -> u128 {
        let n = self.n();
        let (d, s) = match *self {
            Self::Single { .. } => (1, 1),
            Self::Shift { s_plus, s_minus, .. } => (1, s_plus + s_minus),
            Self::Lee { t, s, .. } => (t, s),
            Self::List { t, s_plus, s_minus, .. } => (t, s_plus + s_minus),
            Self::Block { t_b, ell, s, .. } => (t_b * ell, s),
        };
        (1u128 << n.min(100))
            .saturating_mul(binomial(n + d, d))
            .saturating_mul(binomial(n + s, s))
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

enum Decoder {
    Single(u64),
    Shift(usize, usize),
    Lee(usize, usize),
    List(usize, usize, usize, u64),
    Block(BlockCodeSpec),
}

/// Outcome for one transmitted word: cases, failures, largest list.
type WordOutcome = (u64, Vec<Counterexample>, usize);

fn check_word(x: &BitString, dec: &Decoder, specs: &[BallSpec]) -> Result<WordOutcome> {
    let received = union_ball(x, specs);
    let mut failures = Vec::new();
    let mut max_list = 0usize;
    let fail = |y: &BitString, detail: String| Counterexample {
        codeword: x.clone(),
        received: y.clone(),
        detail,
    };
    match dec {
        Decoder::Single(p) => {
            let spec = SingleCodeSpec::new(x.len(), *p, single_codes::syndrome(x, *p))?;
            for y in &received {
                match single_codes::decode(y, &spec) {
                    Ok(z) if &z == x => {}
                    other => failures.push(fail(y, format!("{other:?}"))),
                }
            }
        }
        Decoder::Shift(sp, sm) => {
            let m = (x.len() + sp + sm + 1) as u64;
            let spec = ShiftCodeSpec::new(x.len(), *sp, *sm, vt_syndrome(x) % m, (x.weight() % 2) as u8)?;
            if !shift_codes::membership(x, &spec) {
                return Ok((0, failures, 0));
            }
            for y in &received {
                match shift_codes::decode(y, &spec) {
                    Ok(z) if &z == x => {}
                    other => failures.push(fail(y, format!("{other:?}"))),
                }
            }
        }
        Decoder::Lee(t, s) => {
            let spec = LeeCodeSpec::containing(x, t + 2 * s);
            for y in &received {
                match lee_codes::decode(y, &spec, *t, *s) {
                    Ok(z) if &z == x => {}
                    other => failures.push(fail(y, format!("{other:?}"))),
                }
            }
        }
        Decoder::List(t, sp, sm, p) => {
            let spec = ListCodeSpec::containing(x, *t, *sp, *sm, *p)?;
            for y in &received {
                let list = list_codes::decode_list(y, &spec);
                max_list = max_list.max(list.len());
                if !list.contains(x) {
                    failures.push(fail(y, format!("missing from list of {}", list.len())));
                }
            }
        }
        Decoder::Block(base) => {
            let z: Vec<u64> = phi(x).gaps().iter().map(|&g| g as u64 % base.p).collect();
            let spec = base.clone().with_coset_of(&z);
            for y in &received {
                match block_codes::decode_nonsys(y, &spec) {
                    Ok(w) if &w == x => {}
                    other => failures.push(fail(y, format!("{other:?}"))),
                }
            }
        }
    }
    Ok((received.len() as u64, failures, max_list))
}

/// Runs the family decoder on every ball member of every word of length `n`
/// and compares with the transmitted word (list membership for list codes).
pub fn exhaustive_decode_check(family: &FamilyParams) -> Result<VerificationReport> {
    let est = family.estimated_cases();
    if est > MAX_CASES {
        return Err(Error::GridTooLarge {
            cases: est,
            limit: MAX_CASES,
        });
    }
    let start = Instant::now();
    let n = family.n();
    let dec = match *family {
        FamilyParams::Single { n } => Decoder::Single(single_codes::default_prime(n)),
        FamilyParams::Shift { s_plus, s_minus, .. } => Decoder::Shift(s_plus, s_minus),
        FamilyParams::Lee { t, s, .. } => Decoder::Lee(t, s),
        FamilyParams::List { t, s_plus, s_minus, p, .. } => Decoder::List(t, s_plus, s_minus, p),
        FamilyParams::Block { n, t_b, ell, s } => {
            Decoder::Block(BlockCodeSpec::new(n, t_b, ell, s)?)
        }
    };
    let specs = family.ball_specs();
    let outcomes: Vec<WordOutcome> = BitString::all(n)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|x| check_word(x, &dec, &specs))
        .collect::<Result<_>>()?;
    let mut cases = 0;
    let mut failures = Vec::new();
    let mut max_list = 0;
    for (c, f, l) in outcomes {
        cases += c;
        failures.extend(f);
        max_list = max_list.max(l);
    }
    let mut report = VerificationReport::new(family.name(), family.params(), cases, failures, start);
    if matches!(family, FamilyParams::List { .. }) {
        report.max_list_size = Some(max_list);
    }
    Ok(report)
}

/// Largest code of length `n` whose union balls are pairwise disjoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxCodeReport {
    pub n: usize,
    /// Size of the best code found.
    pub lower: usize,
    /// Certified upper bound; equal to `lower` when `exact`.
    pub upper: usize,
    pub exact: bool,
}

struct Component {
    adj: Vec<Vec<usize>>,
    cliques: Vec<Vec<usize>>,
}

impl Component {
    /// Greedy cover of `alive` by known cliques; its size bounds any
    /// independent set inside `alive`.
    fn cover_bound(&self, alive: &[bool], member: &[Vec<usize>]) -> usize {
        let mut covered: Vec<bool> = alive.iter().map(|a| !a).collect();
        let mut count = 0;
        for v in 0..alive.len() {
            if covered[v] {
                continue;
            }
            count += 1;
            let best = member[v]
                .iter()
                .max_by_key(|&&c| self.cliques[c].iter().filter(|&&u| !covered[u]).count());
            covered[v] = true;
            if let Some(&c) = best {
                for &u in &self.cliques[c] {
                    covered[u] = true;
                }
            }
        }
        count
    }

    fn greedy(&self) -> usize {
        let k = self.adj.len();
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by_key(|&v| self.adj[v].len());
        let mut blocked = vec![false; k];
        let mut size = 0;
        for v in order {
            if !blocked[v] {
                size += 1;
                blocked[v] = true;
                for &u in &self.adj[v] {
                    blocked[u] = true;
                }
            }
        }
        size
    }

    fn search(
        &self,
        alive: &mut Vec<bool>,
        member: &[Vec<usize>],
        current: usize,
        best: &mut usize,
        nodes: &mut u64,
        budget: u64,
    ) -> bool {
        *nodes += 1;
        if *nodes > budget {
            return false;
        }
        let live: Vec<usize> = (0..alive.len()).filter(|&v| alive[v]).collect();
        if live.is_empty() {
            *best = (*best).max(current);
            return true;
        }
        if current + self.cover_bound(alive, member) <= *best {
            return true;
        }
        let deg = |v: usize| self.adj[v].iter().filter(|&&u| alive[u]).count();
        // a vertex of degree <= 1 always belongs to some maximum set
        if let Some(&v) = live.iter().find(|&&v| deg(v) <= 1) {
            let removed = self.take(alive, v);
            let ok = self.search(alive, member, current + 1, best, nodes, budget);
            restore(alive, &removed);
            return ok;
        }
        let v = *live.iter().max_by_key(|&&v| deg(v)).expect("nonempty");
        let removed = self.take(alive, v);
        let ok = self.search(alive, member, current + 1, best, nodes, budget);
        restore(alive, &removed);
        if !ok {
            return false;
        }
        alive[v] = false;
        let ok = self.search(alive, member, current, best, nodes, budget);
        alive[v] = true;
        ok
    }

    fn take(&self, alive: &mut [bool], v: usize) -> Vec<usize> {
        let mut removed = vec![v];
        alive[v] = false;
        for &u in &self.adj[v] {
            if alive[u] {
                alive[u] = false;
                removed.push(u);
            }
        }
        removed
    }
}

fn restore(alive: &mut [bool], removed: &[usize]) {
    for &u in removed {
        alive[u] = true;
    }
}

/// Maximum code search: the conflict graph joins words whose balls meet;
/// each component is solved by branch and bound with a clique-cover bound,
/// falling back to greedy and the cover bound past `node_budget`.
pub fn max_code_search(n: usize, specs: &[BallSpec], node_budget: u64) -> Result<MaxCodeReport> {
    if n > 14 {
        return Err(Error::GridTooLarge {
            cases: 1u128 << n,
            limit: 1 << 14,
        });
    }
    let words: Vec<BitString> = BitString::all(n).collect();
    let mut reach: HashMap<BitString, Vec<usize>> = HashMap::new();
    for (i, x) in words.iter().enumerate() {
        for y in union_ball(x, specs) {
            reach.entry(y).or_default().push(i);
        }
    }
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); words.len()];
    let mut cliques: Vec<Vec<usize>> = Vec::new();
    for group in reach.into_values() {
        if group.len() > 1 {
            for &a in &group {
                adj[a].extend(group.iter().copied().filter(|&b| b != a));
            }
            cliques.push(group);
        }
    }
    // connected components
    let mut comp = vec![usize::MAX; words.len()];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for s in 0..words.len() {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = comps.len();
        let mut stack = vec![s];
        comp[s] = id;
        let mut verts = Vec::new();
        while let Some(v) = stack.pop() {
            verts.push(v);
            for &u in &adj[v] {
                if comp[u] == usize::MAX {
                    comp[u] = id;
                    stack.push(u);
                }
            }
        }
        comps.push(verts);
    }
    let mut comp_cliques: Vec<Vec<Vec<usize>>> = vec![Vec::new(); comps.len()];
    for c in cliques {
        comp_cliques[comp[c[0]]].push(c);
    }
    let results: Vec<(usize, usize, bool)> = comps
        .into_par_iter()
        .zip(comp_cliques)
        .map(|(verts, cl)| {
            let local: HashMap<usize, usize> =
                verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
            let c = Component {
                adj: verts
                    .iter()
                    .map(|v| adj[*v].iter().map(|u| local[u]).collect())
                    .collect(),
                cliques: cl
                    .iter()
                    .map(|q| q.iter().map(|u| local[u]).collect())
                    .collect(),
            };
            let mut member = vec![Vec::new(); verts.len()];
            for (ci, q) in c.cliques.iter().enumerate() {
                for &u in q {
                    member[u].push(ci);
                }
            }
            let mut alive = vec![true; verts.len()];
            let upper_cover = c.cover_bound(&alive, &member);
            let mut best = c.greedy();
            let mut nodes = 0;
            let done = c.search(&mut alive, &member, 0, &mut best, &mut nodes, node_budget);
            if done {
                (best, best, true)
            } else {
                (best, upper_cover, false)
            }
        })
        .collect();
    Ok(MaxCodeReport {
        n,
        lower: results.iter().map(|r| r.0).sum(),
        upper: results.iter().map(|r| r.1).sum(),
        exact: results.iter().all(|r| r.2),
    })
}
