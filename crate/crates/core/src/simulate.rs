//! Mass-action simulation in `f64`, for empirical cross-checks only.
//!
//! `dx/dt = Σ_r k_r (y'_r - y_r) x^{y_r}` integrated with the Dormand–Prince 5(4) pair. States are
//! never clamped; a step that drives a component below `-1e-12` is rejected and retried smaller.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::ReactionNetwork;
use crate::persistence::{self, PersistenceRule, PersistenceVerdict};
use crate::rational::{self, Rational};

const NEGATIVE_TOLERANCE: f64 = -1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationParams {
    /// One rate constant per reaction, in reaction order.
    #[serde(with = "rational::serde_q::vec")]
    pub rates: Vec<Rational>,
    /// One concentration per species, in species order.
    #[serde(with = "rational::serde_q::vec")]
    pub initial: Vec<Rational>,
    pub t_end: f64,
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    /// Times the integrator must land on exactly (besides `0` and `t_end`).
    pub sample_times: Vec<f64>,
}

impl SimulationParams {
    pub fn new(rates: Vec<Rational>, initial: Vec<Rational>, t_end: f64) -> Self {
        Self {
            rates,
            initial,
            t_end,
            rtol: 1e-10,
            atol: 1e-12,
            max_steps: 1_000_000,
            sample_times: Vec::new(),
        }
    }

    pub fn with_sample_times(mut self, times: Vec<f64>) -> Self {
        self.sample_times = times;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationRun {
    pub params: SimulationParams,
    pub times: Vec<f64>,
    /// `trajectory[i]` is the state at `times[i]`.
    pub trajectory: Vec<Vec<f64>>,
    pub min_concentration: f64,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

impl SimulationRun {
    /// State at a recorded time (exact match).
    pub fn state_at(&self, t: f64) -> Option<&[f64]> {
        self.times.iter().position(|&s| s == t).map(|i| self.trajectory[i].as_slice())
    }

    pub fn final_state(&self) -> &[f64] {
        self.trajectory.last().expect("trajectory includes the initial state")
    }

    /// CSV with header `t,<species...>`.
    pub fn to_csv(&self, species: &[String]) -> String {
        let mut out = String::from("t");
        for s in species {
            out.push(',');
            out.push_str(s);
        }
        out.push('\n');
        for (t, x) in self.times.iter().zip(&self.trajectory) {
            out.push_str(&t.to_string());
            for v in x {
                out.push(',');
                out.push_str(&v.to_string());
            }
            out.push('\n');
        }
        out
    }
}

struct Kinetics {
    rates: Vec<f64>,
    reactant: Vec<Vec<(usize, f64, bool)>>,
    delta: Vec<Vec<(usize, f64)>>,
    n: usize,
}

impl Kinetics {
    fn new(net: &ReactionNetwork, rates: &[f64]) -> Self {
        let n = net.num_species();
        let reactant = net
            .reactions()
            .iter()
            .map(|r| {
                r.reactant
                    .iter()
                    .map(|(s, q)| (s, rational::to_f64(q), rational::is_integer(q)))
                    .collect()
            })
            .collect();
        let delta = net
            .reactions()
            .iter()
            .map(|r| {
                r.vector(n)
                    .iter()
                    .enumerate()
                    .filter(|(_, q)| !q.is_zero())
                    .map(|(s, q)| (s, rational::to_f64(q)))
                    .collect()
            })
            .collect();
        Self {
            rates: rates.to_vec(),
            reactant,
            delta,
            n,
        }
    }

    fn rhs(&self, x: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        for (r, k) in self.rates.iter().enumerate() {
            let mut flux = *k;
            for &(s, e, integral) in &self.reactant[r] {
                flux *= if integral {
                    x[s].powi(e as i32)
                } else {
                    x[s].max(0.0).powf(e)
                };
            }
            for &(s, d) in &self.delta[r] {
                out[s] += flux * d;
            }
        }
    }
}

/// `dx/dt` in `f64`.
pub fn mass_action_rhs(net: &ReactionNetwork, rates: &[f64], x: &[f64]) -> Vec<f64> {
    let kin = Kinetics::new(net, rates);
    let mut out = vec![0.0; kin.n];
    kin.rhs(x, &mut out);
    out
}

/// `dx/dt` in exact arithmetic. Needs integer reactant coefficients.
pub fn mass_action_rhs_exact(
    net: &ReactionNetwork,
    rates: &[Rational],
    x: &[Rational],
) -> Result<Vec<Rational>> {
    check_lengths(net, rates.len(), x.len())?;
    let n = net.num_species();
    let mut out = vec![Rational::zero(); n];
    for (r, k) in net.reactions().iter().zip(rates) {
        let mut flux = k.clone();
        for (s, e) in r.reactant.iter() {
            if !rational::is_integer(e) {
                return Err(Error::Precondition(
                    "exact rate law needs integer reactant coefficients".into(),
                ));
            }
            let e: i32 = e
                .to_integer()
                .try_into()
                .map_err(|_| Error::InvalidParameter("exponent too large".into()))?;
            flux *= num_traits::pow::Pow::pow(&x[s], e);
        }
        for (o, d) in out.iter_mut().zip(r.vector(n)) {
            *o += &flux * d;
        }
    }
    Ok(out)
}

fn check_lengths(net: &ReactionNetwork, rates: usize, x: usize) -> Result<()> {
    if rates != net.num_reactions() {
        return Err(Error::InvalidParameter(format!(
            "{rates} rates for {} reactions",
            net.num_reactions()
        )));
    }
    if x != net.num_species() {
        return Err(Error::InvalidParameter(format!(
            "{x} initial values for {} species",
            net.num_species()
        )));
    }
    Ok(())
}

// Dormand–Prince 5(4) tableau; the system is autonomous so the nodes are not needed.
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

pub fn simulate(net: &ReactionNetwork, params: &SimulationParams) -> Result<SimulationRun> {
    check_lengths(net, params.rates.len(), params.initial.len())?;
    if params.rates.iter().any(|k| !k.is_positive()) {
        return Err(Error::InvalidParameter("rates must be strictly positive".into()));
    }
    if params.initial.iter().any(|x| !x.is_positive()) {
        return Err(Error::InvalidParameter("initial point must be strictly positive".into()));
    }
    if !(params.t_end.is_finite() && params.t_end > 0.0) {
        return Err(Error::InvalidParameter("t_end must be positive".into()));
    }
    if !(params.rtol > 0.0 && params.atol > 0.0) {
        return Err(Error::InvalidParameter("tolerances must be positive".into()));
    }
    let rates: Vec<f64> = params.rates.iter().map(rational::to_f64).collect();
    let kin = Kinetics::new(net, &rates);
    let n = kin.n;
    let mut stops: Vec<f64> = params
        .sample_times
        .iter()
        .copied()
        .filter(|&t| t > 0.0 && t < params.t_end)
        .chain([params.t_end])
        .collect();
    stops.sort_by(f64::total_cmp);
    stops.dedup();

    let mut t = 0.0;
    let mut x: Vec<f64> = params.initial.iter().map(rational::to_f64).collect();
    let mut times = vec![t];
    let mut trajectory = vec![x.clone()];
    let mut h = (params.t_end * 1e-3).min(1e-2);
    let (mut accepted, mut rejected) = (0, 0);
    let mut k = vec![vec![0.0; n]; 7];
    let mut stage = vec![0.0; n];
    let mut next_stop = 0;

    while next_stop < stops.len() {
        if accepted + rejected >= params.max_steps {
            return Err(Error::Integration(format!("step limit reached at t = {t}")));
        }
        let stop = stops[next_stop];
        let landing = t + h >= stop;
        let step = if landing { stop - t } else { h };
        if step <= 1e-14 * t.abs().max(1.0) && !landing {
            return Err(Error::Integration(format!("step size underflow at t = {t}")));
        }
        kin.rhs(&x, &mut k[0]);
        for s in 1..7 {
            for i in 0..n {
                stage[i] = x[i] + step * (0..s).map(|j| A[s][j] * k[j][i]).sum::<f64>();
            }
            kin.rhs(&stage, &mut k[s]);
        }
        let mut err = 0.0;
        let mut x_new = vec![0.0; n];
        for i in 0..n {
            x_new[i] = x[i] + step * (0..7).map(|j| B[j] * k[j][i]).sum::<f64>();
            let e = step * (0..7).map(|j| (B[j] - B4[j]) * k[j][i]).sum::<f64>();
            let scale = params.atol + params.rtol * x[i].abs().max(x_new[i].abs());
            err += (e / scale).powi(2);
        }
        let err = (err / n.max(1) as f64).sqrt();
        let finite = err.is_finite() && x_new.iter().all(|v| v.is_finite());
        if !finite || err > 1.0 || x_new.iter().any(|&v| v < NEGATIVE_TOLERANCE) {
            rejected += 1;
            h = if finite && err > 1.0 {
                step * (0.9 * err.powf(-0.2)).clamp(0.1, 0.9)
            } else {
                step * 0.5
            };
            if h <= 1e-14 * t.abs().max(1.0) {
                return Err(Error::Integration(if finite {
                    format!("step size underflow at t = {t}")
                } else {
                    format!("non-finite state near t = {t}")
                }));
            }
            continue;
        }
        accepted += 1;
        t = if landing { stop } else { t + step };
        x = x_new;
        times.push(t);
        trajectory.push(x.clone());
        if landing {
            next_stop += 1;
        }
        let grow = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h = if landing { h.max(step * grow) } else { step * grow };
    }

    let min_concentration = trajectory
        .iter()
        .flatten()
        .copied()
        .fold(f64::INFINITY, f64::min);
    Ok(SimulationRun {
        params: params.clone(),
        times,
        trajectory,
        min_concentration,
        accepted_steps: accepted,
        rejected_steps: rejected,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeTrial {
    pub index: usize,
    pub rates: Vec<f64>,
    pub initial: Vec<f64>,
    pub min_concentration: Option<f64>,
    pub final_state: Option<Vec<f64>>,
    /// Some species decreased monotonically over the second half and ended below `1e-6`.
    pub trending_to_zero: bool,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub seed: u64,
    pub t_end: f64,
    pub verdict: PersistenceVerdict,
    pub rule: PersistenceRule,
    pub trials: Vec<ProbeTrial>,
    /// Trials that trend to zero although the certificate says persistent.
    pub flagged: Vec<usize>,
}

fn log_uniform(rng: &mut ChaCha8Rng) -> f64 {
    let (lo, hi) = (0.1f64.ln(), 10f64.ln());
    rng.random_range(lo..hi).exp()
}

fn trends_to_zero(run: &SimulationRun) -> bool {
    let half = run.params.t_end / 2.0;
    let tail: Vec<&Vec<f64>> = run
        .times
        .iter()
        .zip(&run.trajectory)
        .filter(|(t, _)| **t >= half)
        .map(|(_, x)| x)
        .collect();
    let Some(last) = tail.last() else { return false };
    (0..last.len()).any(|s| {
        last[s] < 1e-6 && tail.windows(2).all(|w| w[1][s] <= w[0][s])
    })
}

/// Random log-uniform rates and initial points in `[0.1, 10]`, seeded. A trial whose integration
/// fails is recorded with its error and never flagged.
pub fn empirical_persistence_probe(
    net: &ReactionNetwork,
    trials: usize,
    t_end: f64,
    seed: u64,
) -> Result<ProbeReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter("at least one trial is required".into()));
    }
    let cert = persistence::certify(net)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(trials);
    let to_q = |v: f64| Rational::from_float(v).unwrap_or_else(Rational::one);
    for index in 0..trials {
        let rates: Vec<f64> = (0..net.num_reactions()).map(|_| log_uniform(&mut rng)).collect();
        let initial: Vec<f64> = (0..net.num_species()).map(|_| log_uniform(&mut rng)).collect();
        let params = SimulationParams::new(
            rates.iter().map(|&v| to_q(v)).collect(),
            initial.iter().map(|&v| to_q(v)).collect(),
            t_end,
        );
        let mut trial = ProbeTrial {
            index,
            rates,
            initial,
            min_concentration: None,
            final_state: None,
            trending_to_zero: false,
            failure: None,
        };
        match simulate(net, &params) {
            Ok(run) => {
                trial.min_concentration = Some(run.min_concentration);
                trial.final_state = Some(run.final_state().to_vec());
                trial.trending_to_zero = trends_to_zero(&run);
            }
            Err(Error::Integration(msg)) => trial.failure = Some(msg),
            Err(e) => return Err(e),
        }
        out.push(trial);
    }
    let flagged = if cert.is_persistent() {
        out.iter().filter(|t| t.trending_to_zero).map(|t| t.index).collect()
    } else {
        Vec::new()
    };
    Ok(ProbeReport {
        seed,
        t_end,
        verdict: cert.verdict,
        rule: cert.rule,
        trials: out,
        flagged,
    })
}
