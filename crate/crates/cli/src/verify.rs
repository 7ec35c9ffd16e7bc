use haartrace::combinatorics::{enumerate_partitions, mobius, CycleType};
use haartrace::cumulants::{
    covariance_closed, trace_cumulant, variance_closed_orthogonal, CumulantRequest, GridCheck,
    ProjectorFamily,
};
use haartrace::weingarten::{BigRational, WeingartenTable};
use haartrace::Group;

use crate::output::{Body, Cell, Table};
use crate::{CliError, Outcome, Scope, VerifyArgs};

/// Names accepted by `--perturb`.
pub const IDENTITIES: [&str; 8] = [
    "mobius_inversion",
    "gram_inverse_unitary",
    "gram_inverse_orthogonal",
    "weingarten_closed_forms",
    "oracle_equivalence_unitary",
    "oracle_equivalence_orthogonal",
    "covariance_closed_form_unitary",
    "variance_closed_form_orthogonal",
];

struct Plan {
    mobius_k: usize,
    weingarten_n: usize,
    unitary_k: usize,
    orthogonal_k: usize,
    oracle_n: usize,
    unitary_r: usize,
    orthogonal_r: usize,
    closed_n: usize,
    /// Extra `(group, n, r, step)` grid checks beyond the full grids.
    sampled: Vec<(Group, usize, usize, u64)>,
}

impl Plan {
    fn for_scope(scope: Scope) -> Plan {
        match scope {
            Scope::Quick => Plan {
                mobius_k: 4,
                weingarten_n: 6,
                unitary_k: 3,
                orthogonal_k: 2,
                oracle_n: 4,
                unitary_r: 3,
                orthogonal_r: 2,
                closed_n: 4,
                sampled: Vec::new(),
            },
            Scope::Default => Plan {
                mobius_k: 5,
                weingarten_n: 8,
                unitary_k: 4,
                orthogonal_k: 3,
                oracle_n: 6,
                unitary_r: 4,
                orthogonal_r: 3,
                closed_n: 6,
                sampled: Vec::new(),
            },
            Scope::Full => Plan {
                mobius_k: 6,
                weingarten_n: 10,
                unitary_k: 4,
                orthogonal_k: 3,
                oracle_n: 6,
                unitary_r: 4,
                orthogonal_r: 3,
                closed_n: 8,
                sampled: vec![
                    (Group::Unitary, 7, 3, 1),
                    (Group::Unitary, 8, 3, 1),
                    (Group::Unitary, 7, 4, 101),
                    (Group::Unitary, 8, 4, 101),
                    (Group::Orthogonal, 7, 3, 1),
                    (Group::Orthogonal, 8, 3, 1),
                ],
            },
        }
    }
}

#[derive(Debug, Default)]
struct Tally {
    checked: u64,
    mismatches: u64,
    example: Option<String>,
}

impl Tally {
    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.mismatches += 1;
            if self.example.is_none() {
                self.example = Some(what());
            }
        }
    }
}

/// Adds a small offset to the first value it sees when armed.
struct Perturbation(bool);

impl Perturbation {
    fn apply(&mut self, x: BigRational) -> BigRational {
        if std::mem::take(&mut self.0) {
            x + BigRational::new(1.into(), 1000.into())
        } else {
            x
        }
    }
}

fn mobius_inversion(p: &Plan, pert: &mut Perturbation) -> Result<Tally, CliError> {
    // Σ_{A ≤ C ≤ B} μ(A, C) = δ(A, B)
    let mut t = Tally::default();
    for k in 1..=p.mobius_k {
        let parts = enumerate_partitions(k)?;
        for a in &parts {
            for b in &parts {
                if !a.refines(b)? {
                    continue;
                }
                let mut sum = 0i64;
                for c in &parts {
                    if a.refines(c)? && c.refines(b)? {
                        sum += mobius(a, c)?;
                    }
                }
                let sum = pert.apply(BigRational::from_integer(sum.into()));
                let want = BigRational::from_integer(i64::from(a == b).into());
                t.record(sum == want, || format!("k = {k}, A = {a}, B = {b}"));
            }
        }
    }
    Ok(t)
}

fn gram_inverse(group: Group, kmax: usize, p: &Plan, pert: &mut Perturbation) -> Result<Tally, CliError> {
    let mut t = Tally::default();
    for k in 1..=kmax {
        for n in k..=p.weingarten_n {
            let table = WeingartenTable::get(group, n, k)?;
            let mut inv = table.inverse().clone();
            inv[(0, 0)] = pert.apply(inv[(0, 0)].clone());
            let ok = table.gram().mul(&inv)?.is_identity();
            t.record(ok, || format!("{group} n = {n} k = {k}"));
        }
    }
    Ok(t)
}

fn weingarten_closed_forms(p: &Plan, pert: &mut Perturbation) -> Result<Tally, CliError> {
    let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
    let mut t = Tally::default();
    for group in [Group::Unitary, Group::Orthogonal] {
        for n in 1..=p.weingarten_n {
            let m = n as i64;
            let one = WeingartenTable::get(group, n, 1)?;
            let got = pert.apply(one.value(&CycleType::new(vec![1]))?.clone());
            t.record(got == r(1, m), || format!("{group} n = {n} k = 1"));
            if n < 2 {
                continue;
            }
            let two = WeingartenTable::get(group, n, 2)?;
            let (id, swap) = match group {
                Group::Unitary => (r(1, m * m - 1), r(-1, m * (m * m - 1))),
                Group::Orthogonal => (r(m + 1, m * (m + 2) * (m - 1)), r(-1, m * (m + 2) * (m - 1))),
            };
            t.record(*two.value(&CycleType::new(vec![1, 1]))? == id, || format!("{group} n = {n} k = 2 id"));
            t.record(*two.value(&CycleType::new(vec![2]))? == swap, || format!("{group} n = {n} k = 2 swap"));
        }
    }
    Ok(t)
}

fn grid_into(t: &mut Tally, grid: &GridCheck, step: u64, pert: &mut Perturbation) -> Result<(), CliError> {
    if pert.0 {
        let (rows, cols) = grid.grid_point(0);
        let (formula, oracle) = grid.values(&rows, &cols)?;
        let formula = pert.apply(formula);
        t.record(formula == oracle, || format!("n = {}, r = {}, rows {rows:?}, cols {cols:?}", grid.n(), grid.order()));
    }
    let rep = grid.run(step)?;
    t.checked += rep.checked;
    t.mismatches += rep.mismatches;
    if t.example.is_none() {
        if let Some((rows, cols)) = rep.examples.first() {
            t.example = Some(format!("n = {}, r = {}, rows {rows:?}, cols {cols:?}", grid.n(), grid.order()));
        }
    }
    Ok(())
}

fn oracle_equivalence(group: Group, rmax: usize, p: &Plan, pert: &mut Perturbation) -> Result<Tally, CliError> {
    let mut t = Tally::default();
    for r in 1..=rmax {
        for n in r.max(2)..=p.oracle_n {
            grid_into(&mut t, &GridCheck::new(group, n, r)?, 1, pert)?;
        }
    }
    for &(g, n, r, step) in p.sampled.iter().filter(|s| s.0 == group) {
        grid_into(&mut t, &GridCheck::new(g, n, r)?, step, pert)?;
    }
    Ok(t)
}

fn kappa2(group: Group, n: usize, a: (usize, usize), b: (usize, usize)) -> Result<BigRational, CliError> {
    Ok(trace_cumulant(&CumulantRequest::new(group, ProjectorFamily::new(n, vec![a, b])?))?)
}

fn covariance_closed_form(p: &Plan, pert: &mut Perturbation) -> Result<Tally, CliError> {
    let mut t = Tally::default();
    for n in 2..=p.closed_n {
        for a in 1..=n {
            for b in 1..=n {
                for a2 in 1..=n {
                    for b2 in 1..=n {
                        let k = pert.apply(kappa2(Group::Unitary, n, (a, b), (a2, b2))?);
                        let ok = k == covariance_closed(a, b, a2, b2, n)?;
                        t.record(ok, || format!("n = {n}, ({a},{b}) x ({a2},{b2})"));
                    }
                }
            }
        }
    }
    Ok(t)
}

fn variance_closed_form(p: &Plan, pert: &mut Perturbation) -> Result<Tally, CliError> {
    let mut t = Tally::default();
    for n in 2..=p.closed_n {
        for a in 1..=n {
            for b in 1..=n {
                let k = pert.apply(kappa2(Group::Orthogonal, n, (a, b), (a, b))?);
                t.record(k == variance_closed_orthogonal(a, b, n)?, || format!("n = {n}, ({a},{b})"));
            }
        }
    }
    Ok(t)
}

pub fn run(args: &VerifyArgs) -> Result<Outcome, CliError> {
    if let Some(name) = &args.perturb {
        if !IDENTITIES.contains(&name.as_str()) {
            return Err(CliError::Usage(format!("unknown identity {name:?}; one of {IDENTITIES:?}")));
        }
    }
    let plan = Plan::for_scope(args.scope);
    let mut table = Table::new("identities", &["identity", "checked", "mismatches", "status", "example"]);
    let mut passed = true;
    for name in IDENTITIES {
        let mut pert = Perturbation(args.perturb.as_deref() == Some(name));
        let tally = match name {
            "mobius_inversion" => mobius_inversion(&plan, &mut pert)?,
            "gram_inverse_unitary" => gram_inverse(Group::Unitary, plan.unitary_k, &plan, &mut pert)?,
            "gram_inverse_orthogonal" => gram_inverse(Group::Orthogonal, plan.orthogonal_k, &plan, &mut pert)?,
            "weingarten_closed_forms" => weingarten_closed_forms(&plan, &mut pert)?,
            "oracle_equivalence_unitary" => oracle_equivalence(Group::Unitary, plan.unitary_r, &plan, &mut pert)?,
            "oracle_equivalence_orthogonal" => {
                oracle_equivalence(Group::Orthogonal, plan.orthogonal_r, &plan, &mut pert)?
            }
            "covariance_closed_form_unitary" => covariance_closed_form(&plan, &mut pert)?,
            "variance_closed_form_orthogonal" => variance_closed_form(&plan, &mut pert)?,
            _ => unreachable!("identity list and dispatch disagree"),
        };
        let ok = tally.mismatches == 0;
        passed &= ok;
        table.push(vec![
            Cell::text(name),
            Cell::Int(tally.checked as i64),
            Cell::Int(tally.mismatches as i64),
            Cell::text(if ok { "pass" } else { "FAIL" }),
            tally.example.map_or(Cell::Empty, Cell::Text),
        ]);
    }
    let mut notes = Vec::new();
    if let Some(name) = &args.perturb {
        notes.push(format!("perturbation injected into {name}"));
    }
    Ok(Outcome {
        body: Body {
            passed,
            tables: vec![table],
        },
        notes,
    })
}
