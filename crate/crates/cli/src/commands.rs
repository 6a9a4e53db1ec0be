use std::fmt;

use uldl_dof::delayed::{run_delayed_scheme, DelayedReport};
use uldl_dof::dof::{classify_regime, regime_closed_forms};
use uldl_dof::gain::{delta_gain, gain_region};
use uldl_dof::lp::{LpSolution, StreamAllocation};
use uldl_dof::sim::{
    asymptotic_dof, default_allocation, make_plan, run_simple_scheme, sweep_seeds, Scheme, SimReport,
};
use uldl_dof::{
    conventional_upper, hotspot_bounds, mimo_ic_upper, par, single_cell_lower, solve_scheme1, solve_scheme2,
    sum_dof, CellConfig, Error, Rational,
};

use crate::output::Record;
use crate::{Command, ConfigArgs, CurveMode};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => f.write_str(msg),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

pub fn exit_code(e: &CliError) -> u8 {
    match e {
        CliError::Usage(_) => 1,
        CliError::Core(Error::SizeCap { .. }) => 3,
        CliError::Core(Error::InconsistentRegimes { .. } | Error::InsufficientNullSpace { .. }) => 2,
        CliError::Core(_) => 1,
    }
}

/// Records to print and, if set, a consistency failure to report after
/// printing them.
pub struct Outcome {
    pub records: Vec<Record>,
    pub failure: Option<String>,
}

impl From<Vec<Record>> for Outcome {
    fn from(records: Vec<Record>) -> Self {
        Outcome { records, failure: None }
    }
}

pub fn run(cmd: &Command, seed: u64) -> Result<Outcome, CliError> {
    match cmd {
        Command::Dof(c) => Ok(vec![dof_record(&config(c)?)].into()),
        Command::Gain { lambda_cap, witness } => gain(*lambda_cap, *witness),
        Command::Curve { mode, n, from, to } => curve(*mode, *n, *from, *to),
        Command::Table2 { lambda_cap } => Ok(table2(*lambda_cap)),
        Command::Simulate {
            config: cfg,
            t,
            scheme,
            seeds,
            lambda1,
            lambda2,
            simple,
            n1,
        } => {
            if *simple {
                let n1 = n1.ok_or_else(|| CliError::Usage("--simple needs --n1".into()))?;
                return simulate_simple(n1, seed, *seeds);
            }
            let [m1, m2, c_n1, n2] = cfg[..] else {
                return Err(CliError::Usage("simulate needs M1 M2 N1 N2 or --simple --n1 N".into()));
            };
            let cfg = CellConfig::new(m1, m2, c_n1, n2)?;
            let scheme = Scheme::from_index(*scheme).expect("validated by clap");
            let alloc = match (lambda1, lambda2) {
                (Some(l1), Some(l2)) => StreamAllocation::new(*l1, *l2)?,
                _ => default_allocation(&cfg, scheme),
            };
            simulate(&cfg, *t, alloc, scheme, seed, *seeds)
        }
        Command::Delayed { seeds } => Ok(delayed(seed, *seeds)),
        Command::Hotspot { l, config: c } => hotspot(*l, &config(c)?),
    }
}

fn config(c: &ConfigArgs) -> Result<CellConfig, CliError> {
    Ok(CellConfig::new(c.m1, c.m2, c.n1, c.n2)?)
}

fn put_config(r: &mut Record, c: &CellConfig) {
    r.set("m1", c.m1()).set("m2", c.m2()).set("n1", c.n1()).set("n2", c.n2());
}

fn put_lp(r: &mut Record, prefix: &str, sol: &LpSolution) {
    r.rational(prefix, sol.value);
    r.rational(&format!("{prefix}_lambda1"), sol.argmax.lambda1);
    r.rational(&format!("{prefix}_lambda2"), sol.argmax.lambda2);
}

fn regime_list(c: &CellConfig) -> String {
    classify_regime(c).iter().map(|r| r.index.to_string()).collect::<Vec<_>>().join(";")
}

fn dof_record(c: &CellConfig) -> Record {
    let mut r = Record::new("dof");
    put_config(&mut r, c);
    r.rational("sum_dof", sum_dof(c))
        .rational("mimo_ic_upper", mimo_ic_upper(c))
        .rational("single_cell_lower", single_cell_lower(c))
        .rational("conventional_upper", conventional_upper(c))
        .set("regimes", regime_list(c));
    put_lp(&mut r, "scheme1", &solve_scheme1(c));
    put_lp(&mut r, "scheme2", &solve_scheme2(c));
    r
}

fn gain(cap: u32, witness: Option<usize>) -> Result<Outcome, CliError> {
    let g = delta_gain(cap)?;
    let mut r = Record::new("gain");
    r.set("lambda_cap", cap)
        .set("gain_count", g.gain_count)
        .set("total", g.total)
        .set("fraction", g.fraction.to_string())
        .set("rendered", g.rendered());
    let mut records = vec![r];
    if let Some(limit) = witness {
        for w in gain_region(cap, limit)? {
            let mut r = Record::new("witness");
            put_config(&mut r, &w.config);
            r.rational("sum_dof", w.d_sigma).rational("conventional_upper", w.d_upper);
            records.push(r);
        }
    }
    Ok(records.into())
}

fn curve(mode: CurveMode, n: u32, from: u32, to: u32) -> Result<Outcome, CliError> {
    if from > to {
        return Err(CliError::Usage(format!("--from {from} exceeds --to {to}")));
    }
    let records = (from..=to)
        .map(|m| {
            let c = match mode {
                CurveMode::Cross => CellConfig::new(m, n, n, m),
                CurveMode::Symmetric => CellConfig::new(m, m, n, n),
            }
            .expect("positive by construction");
            let mut r = Record::new("curve");
            r.set("m", m).set("n", n);
            put_config(&mut r, &c);
            r.rational("sum_dof", sum_dof(&c))
                .rational("mimo_ic_upper", mimo_ic_upper(&c))
                .rational("single_cell_lower", single_cell_lower(&c));
            r
        })
        .collect::<Vec<_>>();
    Ok(records.into())
}

fn table2(cap: u32) -> Outcome {
    let total = (cap as u64).pow(4);
    let rows = par::map_range(0..total, |i| {
        let c = CellConfig::grid_at(cap, i);
        let (s1, s2, d) = (solve_scheme1(&c).value, solve_scheme2(&c).value, sum_dof(&c));
        let mut r = Record::new("table2");
        put_config(&mut r, &c);
        r.set("regimes", regime_list(&c));
        let agree = match regime_closed_forms(&c) {
            Ok(v) => {
                r.rational("d1", v.d1).rational("d2", v.d2).rational("dmax", v.dmax);
                v.d1 == s1 && v.d2 == s2 && v.dmax == s1.max(s2) && v.dmax == d
            }
            Err(_) => false,
        };
        r.rational("lp1", s1).rational("lp2", s2).rational("sum_dof", d).set("agree", agree);
        (r, agree)
    });
    let mismatches = rows.iter().filter(|(_, ok)| !ok).count();
    Outcome {
        records: rows.into_iter().map(|(r, _)| r).collect(),
        failure: (mismatches > 0).then(|| format!("{mismatches} configs disagree with the LP optimum")),
    }
}

fn sim_record(rep: &SimReport) -> Record {
    let mut r = Record::new("seed");
    r.set("seed", rep.seed).set("kind", rep.kind);
    put_config(&mut r, &rep.config);
    if let Some(p) = &rep.plan {
        r.set("t", p.t)
            .rational("lambda1", p.alloc.lambda1)
            .rational("lambda2", p.alloc.lambda2)
            .set("replication", p.replication);
    }
    r.set("slots", rep.slots)
        .set("alpha_streams_per_user", rep.alpha_streams_per_user)
        .set("beta_streams_per_user", rep.beta_streams_per_user)
        .set("alignment_rank", rep.alignment_rank)
        .set("alignment_bounds_ok", rep.alignment_bounds_ok)
        .set("in_orthogonality_max_abs", rep.in_orthogonality_max_abs)
        .set("bs_alpha_decodable", rep.bs_alpha_decodable)
        .set("bs_alpha_leakage", rep.bs_alpha_leakage)
        .set("beta_users_decodable", rep.beta_users_decodable.iter().all(|&b| b))
        .rational("achieved_dof", rep.achieved_dof)
        .set("passed", rep.passed);
    r
}

fn summary(kind: &str, seeds: u64, passed: u64) -> Record {
    let mut r = Record::new("summary");
    r.set("kind", kind)
        .set("seeds", seeds)
        .set("passed", passed)
        .rational("pass_fraction", Rational::new(passed as i64, seeds as i64));
    r
}

fn simulate(
    cfg: &CellConfig,
    t: u32,
    alloc: StreamAllocation,
    scheme: Scheme,
    first: u64,
    count: u64,
) -> Result<Outcome, CliError> {
    let plan = make_plan(cfg, t, alloc, scheme)?;
    let reports = sweep_seeds(cfg, t, alloc, scheme, first, count)?;
    let passed = reports.iter().filter(|r| r.passed).count() as u64;
    let mut records: Vec<Record> = reports.iter().map(sim_record).collect();
    let mut s = summary(reports[0].kind, count, passed);
    s.rational("achieved_dof", uldl_dof::sim::achieved_dof(&plan))
        .rational("asymptotic_dof", asymptotic_dof(cfg, &alloc));
    records.push(s);
    Ok(records.into())
}

fn simulate_simple(n1: u32, first: u64, count: u64) -> Result<Outcome, CliError> {
    let reports = par::map_range(first..first + count, |seed| run_simple_scheme(n1, seed))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let passed = reports.iter().filter(|r| r.passed).count() as u64;
    let mut records: Vec<Record> = reports.iter().map(sim_record).collect();
    let mut s = summary("simple", count, passed);
    s.rational("achieved_dof", reports[0].achieved_dof);
    records.push(s);
    Ok(records.into())
}

fn delayed_record(rep: &DelayedReport) -> Record {
    let mut r = Record::new("seed");
    r.set("seed", rep.seed)
        .set("max_abs_error", rep.max_abs_error)
        .set("b1_residual", rep.b1_residual)
        .set("condition_alpha", rep.condition_alpha)
        .set("condition_beta", rep.condition_beta)
        .set("causality_ok", rep.causality_ok)
        .set("flagged", rep.flagged)
        .rational("dof", rep.dof)
        .set("passed", rep.passed);
    r
}

/// Nearest-rank percentile of a sorted slice.
fn percentile(sorted: &[f64], p: u64) -> f64 {
    let rank = (p as usize * sorted.len()).div_ceil(100).max(1);
    sorted[rank - 1]
}

fn delayed(first: u64, count: u64) -> Outcome {
    let reports = par::map_range(first..first + count, |seed| run_delayed_scheme(seed, None));
    let passed = reports.iter().filter(|r| r.passed).count() as u64;
    let causal = reports.iter().filter(|r| r.causality_ok).count() as u64;
    let mut errors: Vec<f64> = reports.iter().map(|r| r.max_abs_error).collect();
    errors.sort_by(f64::total_cmp);
    let mut records: Vec<Record> = reports.iter().map(delayed_record).collect();
    let mut s = summary("delayed", count, passed);
    s.set("causality_ok", causal)
        .set("max_abs_error_p99", percentile(&errors, 99))
        .set("max_abs_error_max", *errors.last().expect("at least one seed"))
        .rational("dof", reports[0].dof);
    records.push(s);
    records.into()
}

fn hotspot(l: u32, c: &CellConfig) -> Result<Outcome, CliError> {
    let h = hotspot_bounds(l, c)?;
    let mut r = Record::new("hotspot");
    r.set("l", l);
    put_config(&mut r, c);
    r.rational("upper", h.conventional_upper)
        .rational("lower", h.uplink_downlink_lower)
        .rational("lambda1", h.allocation.lambda1)
        .rational("lambda2", h.allocation.lambda2);
    Ok(vec![r].into())
}
