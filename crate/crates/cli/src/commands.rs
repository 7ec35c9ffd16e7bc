use haartrace::cumulants::{
    covariance_closed, limit_covariance, oracle_cumulant, trace_cumulant, variance_closed_orthogonal, CumulantRequest, ProjectorFamily,
};
use haartrace::empirics::{
    covariance_mc, floor_index, kstat_estimators, map_replicas, product_grid, spectral_compare,
    ProcessSample, SPECTRAL_BINS,
};
use haartrace::weingarten::{BigRational, WeingartenTable};
use haartrace::Group;
use num_traits::{ToPrimitive, Zero};

use crate::output::{Body, Cell, Table};
use crate::{CliError, CumulantArgs, Outcome, SimulateArgs, SpectraArgs, WeingartenArgs};

/// Monte Carlo against an exact finite-n value: within this many jackknife SEs.
pub const SE_TOLERANCE: f64 = 4.0;
/// Monte Carlo against the n → ∞ limit: extra absolute slack for the finite-n gap.
pub const LIMIT_SLACK: f64 = 0.01;

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn weingarten(group: Group, a: &WeingartenArgs) -> Result<Outcome, CliError> {
    let table = WeingartenTable::get(group, a.n, a.k)?;
    let mut t = Table::new("weingarten", &["group", "n", "k", "class", "cycle_type", "value", "value_f64"]);
    // cycle types in lexicographic order, identity class first
    for (class, value) in table.values() {
        t.push(vec![
            Cell::text(group.as_str()),
            Cell::int(a.n),
            Cell::int(a.k),
            Cell::text(class.representative().to_string()),
            Cell::text(class.to_string()),
            Cell::exact(value),
            Cell::Float(to_f64(value)),
        ]);
    }
    Ok(Outcome {
        body: Body {
            passed: true,
            tables: vec![t],
        },
        notes: Vec::new(),
    })
}

/// Parses `"p:q,p:q"`.
pub fn parse_dims(s: &str) -> Result<Vec<(usize, usize)>, CliError> {
    s.split(',')
        .map(|item| {
            let (p, q) = item
                .trim()
                .split_once(':')
                .ok_or_else(|| CliError::Usage(format!("dims entry {item:?} is not p:q")))?;
            let parse = |x: &str| {
                x.trim()
                    .parse::<usize>()
                    .map_err(|_| CliError::Usage(format!("dims entry {item:?} is not p:q")))
            };
            Ok((parse(p)?, parse(q)?))
        })
        .collect()
}

fn closed_form(group: Group, n: usize, dims: &[(usize, usize)]) -> Result<Option<BigRational>, CliError> {
    if dims.len() != 2 || n < 2 {
        return Ok(None);
    }
    let ((p, q), (p2, q2)) = (dims[0], dims[1]);
    Ok(match group {
        Group::Unitary => Some(covariance_closed(p, q, p2, q2, n)?),
        Group::Orthogonal if (p, q) == (p2, q2) => Some(variance_closed_orthogonal(p, q, n)?),
        Group::Orthogonal => None,
    })
}

pub fn cumulant(group: Group, a: &CumulantArgs) -> Result<Outcome, CliError> {
    let mut dims = parse_dims(&a.dims)?;
    let r = a.r.unwrap_or(dims.len());
    if dims.len() == 1 {
        dims = vec![dims[0]; r];
    }
    if dims.len() != r {
        return Err(CliError::Usage(format!("--r {r} but {} dims given", dims.len())));
    }
    let req = CumulantRequest::new(group, ProjectorFamily::new(a.n, dims.clone())?);
    let formula = trace_cumulant(&req)?;
    let oracle = oracle_cumulant(&req)?;
    let closed = closed_form(group, a.n, &dims)?;
    let closed_match = closed.as_ref().map(|c| *c == formula);
    let matched = formula == oracle && closed_match.unwrap_or(true);

    let dims_text = dims.iter().map(|(p, q)| format!("{p}:{q}")).collect::<Vec<_>>().join(",");
    let mut t = Table::new(
        "cumulant",
        &["group", "n", "r", "dims", "formula", "oracle", "closed_form", "value_f64", "match"],
    );
    t.push(vec![
        Cell::text(group.as_str()),
        Cell::int(a.n),
        Cell::int(r),
        Cell::text(dims_text),
        Cell::exact(&formula),
        Cell::exact(&oracle),
        closed.as_ref().map_or(Cell::Empty, Cell::exact),
        Cell::Float(to_f64(&formula)),
        Cell::Bool(matched),
    ]);
    Ok(Outcome {
        body: Body {
            passed: matched,
            tables: vec![t],
        },
        notes: Vec::new(),
    })
}

fn exact_covariance(group: Group, n: usize, a: (usize, usize), b: (usize, usize)) -> Result<BigRational, CliError> {
    if [a.0, a.1, b.0, b.1].contains(&0) {
        return Ok(BigRational::zero());
    }
    Ok(match group {
        Group::Unitary => covariance_closed(a.0, a.1, b.0, b.1, n)?,
        Group::Orthogonal => trace_cumulant(&CumulantRequest::new(group, ProjectorFamily::new(n, vec![a, b])?))?,
    })
}

pub fn simulate(group: Group, seed: u64, a: &SimulateArgs) -> Result<Outcome, CliError> {
    if a.n < 2 {
        return Err(CliError::Usage("simulate needs --n >= 2".into()));
    }
    if let Some(x) = a.grid.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(CliError::Usage(format!("grid level {x} outside [0, 1]")));
    }
    let grid = product_grid(&a.grid);
    let rows = map_replicas(group, a.n, a.replicas, seed, |f| Ok(ProcessSample::from_field(f, &grid)?.values))?;
    let cov = covariance_mc(&rows)?;
    let dims: Vec<(usize, usize)> = grid
        .iter()
        .map(|&(s, t)| (floor_index(a.n, s), floor_index(a.n, t)))
        .collect();

    let mut passed = true;
    let mut ct = Table::new(
        "covariance",
        &[
            "s", "t", "s2", "t2", "estimate", "se", "exact", "exact_f64", "z_exact", "limit", "finite_n_gap",
            "pass_exact", "pass_limit",
        ],
    );
    for i in 0..grid.len() {
        for j in i..grid.len() {
            let (e, se) = (cov.estimate[i][j], cov.se[i][j]);
            let exact = exact_covariance(group, a.n, dims[i], dims[j])?;
            let exact_f = to_f64(&exact);
            let (s, t) = grid[i];
            let (s2, t2) = grid[j];
            let limit = limit_covariance(s, t, s2, t2, group);
            let dev = (e - exact_f).abs();
            let z = if se > 0.0 { dev / se } else if dev == 0.0 { 0.0 } else { f64::INFINITY };
            let pass_exact = dev <= SE_TOLERANCE * se;
            let pass_limit = (e - limit).abs() <= LIMIT_SLACK + SE_TOLERANCE * se;
            passed &= pass_exact && pass_limit;
            ct.push(vec![
                Cell::Float(s),
                Cell::Float(t),
                Cell::Float(s2),
                Cell::Float(t2),
                Cell::Float(e),
                Cell::Float(se),
                Cell::exact(&exact),
                Cell::Float(exact_f),
                Cell::Float(z),
                Cell::Float(limit),
                Cell::Float(exact_f - limit),
                Cell::Bool(pass_exact),
                Cell::Bool(pass_limit),
            ]);
        }
    }

    let mut pt = Table::new(
        "points",
        &["s", "t", "p", "q", "k2", "se2", "k3", "se3", "k4", "se4", "exact_variance"],
    );
    for (idx, (&(s, t), &(p, q))) in grid.iter().zip(&dims).enumerate() {
        let column: Vec<f64> = rows.iter().map(|r| r[idx]).collect();
        let k = kstat_estimators(&column)?;
        let var = exact_covariance(group, a.n, (p, q), (p, q))?;
        pt.push(vec![
            Cell::Float(s),
            Cell::Float(t),
            Cell::int(p),
            Cell::int(q),
            Cell::Float(k.k2),
            Cell::Float(k.se2),
            Cell::Float(k.k3),
            Cell::Float(k.se3),
            Cell::Float(k.k4),
            Cell::Float(k.se4),
            Cell::exact(&var),
        ]);
    }
    Ok(Outcome {
        body: Body {
            passed,
            tables: vec![ct, pt],
        },
        notes: vec![format!(
            "tolerance: exact within {SE_TOLERANCE} SE; limit within {LIMIT_SLACK} + {SE_TOLERANCE} SE"
        )],
    })
}

pub fn spectra(group: Group, seed: u64, a: &SpectraArgs) -> Result<Outcome, CliError> {
    let cmp = spectral_compare(group, a.n, a.s, a.t, a.replicas, seed)?;
    let mut st = Table::new(
        "summary",
        &[
            "group", "n", "p", "q", "replicas", "bins", "l1", "mean_eigenvalue", "mean_eigenvalue_se",
            "min_eigenvalue", "max_eigenvalue", "u_minus", "u_plus", "c", "clean_regime",
        ],
    );
    st.push(vec![
        Cell::text(group.as_str()),
        Cell::int(a.n),
        Cell::int(cmp.p),
        Cell::int(cmp.q),
        Cell::int(cmp.replicas),
        Cell::int(SPECTRAL_BINS),
        Cell::Float(cmp.l1),
        Cell::Float(cmp.mean_eigenvalue),
        Cell::Float(cmp.mean_eigenvalue_se),
        Cell::Float(cmp.min_eigenvalue),
        Cell::Float(cmp.max_eigenvalue),
        Cell::Float(cmp.law.u_minus),
        Cell::Float(cmp.law.u_plus),
        Cell::Float(cmp.law.c),
        Cell::Bool(cmp.law.clean_regime),
    ]);
    let mut ht = Table::new("histogram", &["bin_lo", "bin_hi", "frequency", "reference_mass", "density_mid"]);
    let h = &cmp.histogram;
    for b in 0..h.frequencies.len() {
        ht.push(vec![
            Cell::Float(h.edges[b]),
            Cell::Float(h.edges[b + 1]),
            Cell::Float(h.frequencies[b]),
            Cell::Float(h.reference[b]),
            Cell::Float(h.density_at_midpoints[b]),
        ]);
    }
    let mut notes = vec![format!("histogram: {SPECTRAL_BINS} equal bins on [0, 1]")];
    notes.extend(cmp.regime_warning.clone());
    Ok(Outcome {
        body: Body {
            passed: true,
            tables: vec![st, ht],
        },
        notes,
    })
}
