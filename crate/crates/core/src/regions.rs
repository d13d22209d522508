//! Per-user achievable rates and rate regions for P-NOMA, AP-NOMA and
//! T-NOMA.
//!
//! Users are indexed strongest first (ascending `σ_r = σ²_n / |h_r|²`).
//! User `r` decodes and cancels every weaker user's layer and treats the
//! layers of the stronger users `k < r` as noise.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::corr::{build_R, DelayProfile};
use crate::csv::CsvTable;
use crate::numerics::{convex_hull, Hull, Matrix};
use crate::pulse::{OverallPulse, Pulse};
use crate::{Error, Result};

/// Powers below this fraction of the budget count as switched off.
pub const ZERO_POWER_FRACTION: f64 = 1e-9;

pub const DEFAULT_RESOLUTION_2: usize = 201;
pub const DEFAULT_RESOLUTION_3: usize = 61;

// relative slack on budget checks, absorbs grid rounding
const BUDGET_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    PNoma,
    ApNoma,
    TNoma,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::PNoma, Method::ApNoma, Method::TNoma];

    pub fn name(self) -> &'static str {
        match self {
            Method::PNoma => "pnoma",
            Method::ApNoma => "apnoma",
            Method::TNoma => "tnoma",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "pnoma" => Ok(Method::PNoma),
            "apnoma" => Ok(Method::ApNoma),
            "tnoma" => Ok(Method::TNoma),
            _ => Err(Error::InvalidParameter(format!(
                "unknown method {s:?} (expected pnoma, apnoma or tnoma)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UserChannel {
    /// `σ²_n / |h|²`, noise referred to the transmitter.
    pub sigma: f64,
    /// Position in the caller's original user list.
    pub index: usize,
}

/// Wraps raw `σ` values as users sorted strongest first.
pub fn sort_users(sigmas: &[f64]) -> Result<Vec<UserChannel>> {
    for &s in sigmas {
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::InvalidParameter(format!("sigma must be positive, got {s}")));
        }
    }
    let mut users: Vec<UserChannel> = sigmas
        .iter()
        .enumerate()
        .map(|(index, &sigma)| UserChannel { sigma, index })
        .collect();
    users.sort_by(|a, b| a.sigma.total_cmp(&b.sigma).then(a.index.cmp(&b.index)));
    Ok(users)
}

fn check_users(users: &[UserChannel]) -> Result<()> {
    if users.is_empty() {
        return Err(Error::InvalidParameter("no users".into()));
    }
    for u in users {
        if !(u.sigma.is_finite() && u.sigma > 0.0) {
            return Err(Error::InvalidParameter(format!("sigma must be positive, got {}", u.sigma)));
        }
    }
    if users.windows(2).any(|w| w[0].sigma > w[1].sigma) {
        return Err(Error::InvalidParameter("users must be sorted strongest first".into()));
    }
    Ok(())
}

fn check_budget(powers: &[f64], users: usize, total_power: f64) -> Result<()> {
    if powers.len() != users {
        return Err(Error::Shape(format!("{} powers for {users} users", powers.len())));
    }
    if let Some(p) = powers.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
        return Err(Error::InvalidParameter(format!("power must be nonnegative, got {p}")));
    }
    let used: f64 = powers.iter().sum();
    if used > total_power * (1.0 + BUDGET_SLACK) {
        return Err(Error::Budget { used, budget: total_power });
    }
    Ok(())
}

fn half_log2(x: f64) -> f64 {
    0.5 * x.log2()
}

/// Synchronous superposition: `R_r = ½log₂(1 + P_r / (Σ_{k<r} P_k + σ_r))`.
pub fn pnoma_rates(users: &[UserChannel], powers: &[f64], total_power: f64) -> Result<Vec<f64>> {
    check_users(users)?;
    check_budget(powers, users.len(), total_power)?;
    let mut stronger = 0.0;
    Ok(users
        .iter()
        .zip(powers)
        .map(|(u, &p)| {
            let r = half_log2(1.0 + p / (stronger + u.sigma));
            stronger += p;
            r
        })
        .collect())
}

/// Slot-to-user permutation: the user served in delay slot `s` is `ψ(s)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment(Vec<usize>);

impl Assignment {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if p >= perm.len() || seen[p] {
                return Err(Error::InvalidParameter(format!("{perm:?} is not a permutation")));
            }
            seen[p] = true;
        }
        Ok(Self(perm))
    }

    pub fn identity(k: usize) -> Self {
        Self((0..k).collect())
    }

    /// All `k!` assignments in lexicographic order.
    pub fn all(k: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut perm: Vec<usize> = (0..k).collect();
        loop {
            out.push(Self(perm.clone()));
            // next lexicographic permutation
            let Some(i) = (1..k).rev().find(|&i| perm[i - 1] < perm[i]) else {
                return out;
            };
            let j = (i..k).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
            perm.swap(i - 1, j);
            perm[i..].reverse();
        }
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Delay of each user given the per-slot delays.
    pub fn user_delays(&self, slot_delays: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.0.len()];
        for (slot, &user) in self.0.iter().enumerate() {
            out[user] = slot_delays[slot];
        }
        out
    }

    /// One-based digits, `ψ = (1, 0, 2)` encodes as `213`.
    pub fn code(&self) -> u64 {
        self.0.iter().fold(0, |acc, &u| acc * 10 + u as u64 + 1)
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

/// Delays of the users that carry power, shifted so the earliest is 0.
/// Switched-off users get `None`.
pub fn active_delays(user_delays: &[f64], powers: &[f64], total_power: f64) -> Vec<Option<f64>> {
    let on = |k: usize| powers[k] >= ZERO_POWER_FRACTION * total_power;
    let earliest = (0..powers.len())
        .filter(|&k| on(k))
        .map(|k| user_delays[k])
        .fold(f64::INFINITY, f64::min);
    (0..powers.len())
        .map(|k| on(k).then(|| user_delays[k] - earliest))
        .collect()
}

/// Asynchronous superposition: stronger users' layers are attenuated by
/// `G_rk` after matched filtering,
/// `R_r = ½log₂(1 + P_r / (Σ_{k<r} G_rk P_k + σ_r))`.
///
/// `slot_delays` are mapped to users through `assignment`; users below
/// [`ZERO_POWER_FRACTION`] of the budget are dropped and the remaining
/// delays re-anchored at 0 before computing `G`.
pub fn apnoma_rates(
    users: &[UserChannel],
    powers: &[f64],
    total_power: f64,
    g: &OverallPulse,
    slot_delays: &[f64],
    assignment: &Assignment,
) -> Result<Vec<f64>> {
    check_users(users)?;
    check_budget(powers, users.len(), total_power)?;
    if slot_delays.len() != users.len() || assignment.0.len() != users.len() {
        return Err(Error::Shape("one delay slot per user required".into()));
    }
    let tau = active_delays(&assignment.user_delays(slot_delays), powers, total_power);
    let mut rates = vec![0.0; users.len()];
    for r in 0..users.len() {
        let Some(tr) = tau[r] else { continue };
        let interference: f64 = (0..r)
            .filter_map(|k| tau[k].map(|tk| g.interference_coefficient(tr, tk) * powers[k]))
            .sum();
        rates[r] = half_log2(1.0 + powers[r] / (interference + users[r].sigma));
    }
    Ok(rates)
}

/// Rates with an explicit interference-coefficient matrix `G[r][k]`.
pub(crate) fn rates_with_coefficients(sigmas: &[f64], powers: &[f64], g: &[Vec<f64>]) -> Vec<f64> {
    (0..sigmas.len())
        .map(|r| {
            let interference: f64 = (0..r).map(|k| g[r][k] * powers[k]).sum();
            half_log2(1.0 + powers[r] / (interference + sigmas[r]))
        })
        .collect()
}

/// Precoded asynchronous transmission: interference-free
/// `R_r = ½log₂(1 + P_r / σ_r)`, independent of pulse and delays.
pub fn tnoma_rates(users: &[UserChannel], powers: &[f64], total_power: f64) -> Result<Vec<f64>> {
    check_users(users)?;
    check_budget(powers, users.len(), total_power)?;
    Ok(users
        .iter()
        .zip(powers)
        .map(|(u, &p)| half_log2(1.0 + p / u.sigma))
        .collect())
}

/// Power split, either one power per user or a `K × N` matrix of
/// per-sub-channel powers for eigen-precoded transmission.
#[derive(Debug, Clone, PartialEq)]
pub enum PowerAllocation {
    PerUser(Vec<f64>),
    PerSubchannel(Matrix),
}

/// A transmission scenario: users, budget, pulse, delay slots and block
/// length.
#[derive(Debug, Clone)]
pub struct Scenario {
    users: Vec<UserChannel>,
    total_power: f64,
    pulse: OverallPulse,
    delays: Vec<f64>,
    block_length: usize,
}

impl Scenario {
    /// `sigmas` in any order; users are sorted strongest first.
    pub fn new(
        sigmas: &[f64],
        total_power: f64,
        pulse: &Pulse,
        delays: &[f64],
        block_length: usize,
    ) -> Result<Self> {
        Self::with_overall_pulse(sigmas, total_power, OverallPulse::new(pulse), delays, block_length)
    }

    pub fn with_overall_pulse(
        sigmas: &[f64],
        total_power: f64,
        pulse: OverallPulse,
        delays: &[f64],
        block_length: usize,
    ) -> Result<Self> {
        let users = sort_users(sigmas)?;
        if users.is_empty() {
            return Err(Error::InvalidParameter("no users".into()));
        }
        if !(total_power.is_finite() && total_power > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "total power must be positive, got {total_power}"
            )));
        }
        if delays.len() != users.len() {
            return Err(Error::Shape(format!(
                "{} delays for {} users",
                delays.len(),
                users.len()
            )));
        }
        DelayProfile::new(delays.to_vec(), pulse.pulse().symbol_interval())?;
        if block_length == 0 {
            return Err(Error::InvalidParameter("block length must be positive".into()));
        }
        Ok(Self {
            users,
            total_power,
            pulse,
            delays: delays.to_vec(),
            block_length,
        })
    }

    pub fn users(&self) -> &[UserChannel] {
        &self.users
    }

    pub fn sigmas(&self) -> Vec<f64> {
        self.users.iter().map(|u| u.sigma).collect()
    }

    pub fn total_power(&self) -> f64 {
        self.total_power
    }

    pub fn overall_pulse(&self) -> &OverallPulse {
        &self.pulse
    }

    pub fn delays(&self) -> &[f64] {
        &self.delays
    }

    pub fn block_length(&self) -> usize {
        self.block_length
    }

    pub fn with_total_power(&self, total_power: f64) -> Result<Self> {
        let mut s = self.clone();
        if !(total_power.is_finite() && total_power > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "total power must be positive, got {total_power}"
            )));
        }
        s.total_power = total_power;
        Ok(s)
    }

    pub fn rates(&self, method: Method, powers: &[f64], assignment: &Assignment) -> Result<Vec<f64>> {
        match method {
            Method::PNoma => pnoma_rates(&self.users, powers, self.total_power),
            Method::ApNoma => apnoma_rates(
                &self.users,
                powers,
                self.total_power,
                &self.pulse,
                &self.delays,
                assignment,
            ),
            Method::TNoma => tnoma_rates(&self.users, powers, self.total_power),
        }
    }
}

/// Eigen-decomposed channel of eigen-precoded transmission. User `k` owns
/// the `k`-th block of `N` eigenvalues of `R` taken in descending order.
#[derive(Debug, Clone)]
pub struct EigenChannel {
    lambdas: Vec<Vec<f64>>,
    sigmas: Vec<f64>,
    total_power: f64,
}

/// Eigenvalues at or below this fraction of the largest make `R` singular.
pub const RANK_TOLERANCE: f64 = 1e-10;

impl EigenChannel {
    pub fn new(scenario: &Scenario) -> Result<Self> {
        let profile = DelayProfile::new(
            scenario.delays.clone(),
            scenario.pulse.pulse().symbol_interval(),
        )?;
        let r = build_R(&scenario.pulse, &profile, scenario.block_length)?;
        let e = r.eigen()?;
        let (hi, lo) = (e.max_value(), e.min_value());
        if lo <= RANK_TOLERANCE * hi {
            return Err(Error::RankDeficient(lo));
        }
        let n = scenario.block_length;
        Ok(Self {
            lambdas: e.values.chunks(n).map(<[f64]>::to_vec).collect(),
            sigmas: scenario.sigmas(),
            total_power: scenario.total_power,
        })
    }

    pub fn eigenvalues(&self, user: usize) -> &[f64] {
        &self.lambdas[user]
    }

    pub fn block_length(&self) -> usize {
        self.lambdas[0].len()
    }

    /// `Σ_k Σ_i P_ki λ_ki`, the transmit energy per block.
    pub fn energy(&self, alloc: &Matrix) -> f64 {
        let mut e = 0.0;
        for (k, l) in self.lambdas.iter().enumerate() {
            for (i, lam) in l.iter().enumerate() {
                e += alloc[(k, i)] * lam;
            }
        }
        e
    }

    /// Split that gives every sub-channel of user `r` received power `P_r`:
    /// `P_ri = P_r / λ_ri`. Uses exactly `N·Σ P_r` of the block budget.
    pub fn equal_split(&self, per_user: &[f64]) -> Matrix {
        let n = self.block_length();
        Matrix::from_fn(self.lambdas.len(), n, |k, i| per_user[k] / self.lambdas[k][i])
    }

    /// `R_r = (1/2N) Σ_i log₂(1 + P_ri λ_ri / σ_r)`.
    pub fn rates(&self, alloc: &Matrix) -> Result<Vec<f64>> {
        let k = self.lambdas.len();
        let n = self.block_length();
        if alloc.rows() != k || alloc.cols() != n {
            return Err(Error::Shape(format!(
                "allocation is {}x{}, expected {k}x{n}",
                alloc.rows(),
                alloc.cols()
            )));
        }
        if let Some(p) = alloc.as_slice().iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
            return Err(Error::InvalidParameter(format!("power must be nonnegative, got {p}")));
        }
        let used = self.energy(alloc);
        let budget = n as f64 * self.total_power;
        if used > budget * (1.0 + BUDGET_SLACK) {
            return Err(Error::Budget { used, budget });
        }
        Ok((0..k)
            .map(|r| {
                let s: f64 = (0..n)
                    .map(|i| (1.0 + alloc[(r, i)] * self.lambdas[r][i] / self.sigmas[r]).log2())
                    .sum();
                s / (2.0 * n as f64)
            })
            .collect())
    }
}

/// T-NOMA rates computed on the decomposed channel.
pub fn tnoma_rates_via_eigen(scenario: &Scenario, alloc: &PowerAllocation) -> Result<Vec<f64>> {
    let ch = EigenChannel::new(scenario)?;
    match alloc {
        PowerAllocation::PerSubchannel(m) => ch.rates(m),
        PowerAllocation::PerUser(p) => {
            check_budget(p, scenario.users.len(), scenario.total_power)?;
            ch.rates(&ch.equal_split(p))
        }
    }
}

/// All integer vectors of length `k` with entries summing to at most `m`,
/// in lexicographic order.
pub fn simplex_grid(k: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, k: usize, left: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == k {
            out.push(prefix.clone());
            return;
        }
        for i in 0..=left {
            prefix.push(i);
            rec(prefix, k, left - i, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(k), k, m, &mut out);
    out
}

pub fn default_resolution(users: usize) -> usize {
    if users <= 2 {
        DEFAULT_RESOLUTION_2
    } else {
        DEFAULT_RESOLUTION_3
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatePoint {
    pub powers: Vec<f64>,
    pub rates: Vec<f64>,
    /// Index into [`RateRegion::assignments`], AP-NOMA only.
    pub assignment: Option<usize>,
}

/// Rate vectors of a power sweep and, for two or three users, their
/// convex hull.
#[derive(Debug, Clone)]
pub struct RateRegion {
    method: Method,
    users: usize,
    assignments: Vec<Assignment>,
    points: Vec<RatePoint>,
    hull: Option<Hull>,
}

impl RateRegion {
    pub fn from_points(
        method: Method,
        users: usize,
        assignments: Vec<Assignment>,
        points: Vec<RatePoint>,
    ) -> Result<Self> {
        if points.iter().any(|p| p.rates.len() != users || p.powers.len() != users) {
            return Err(Error::Shape("rate point width differs from user count".into()));
        }
        let hull = if (2..=3).contains(&users) && !points.is_empty() {
            let rates: Vec<Vec<f64>> = points.iter().map(|p| p.rates.clone()).collect();
            Some(convex_hull(&rates)?)
        } else {
            None
        };
        Ok(Self {
            method,
            users,
            assignments,
            points,
            hull,
        })
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn users(&self) -> usize {
        self.users
    }

    pub fn assignments(&self) -> &[Assignment] {
        &self.assignments
    }

    pub fn points(&self) -> &[RatePoint] {
        &self.points
    }

    pub fn hull(&self) -> Result<&Hull> {
        self.hull.as_ref().ok_or(Error::UnsupportedDimension(self.users))
    }

    pub fn hull_vertices(&self) -> Result<Vec<Vec<f64>>> {
        Ok(self.hull()?.vertex_coords().to_vec())
    }

    pub fn contains(&self, rates: &[f64], tol: f64) -> Result<bool> {
        Ok(self.hull()?.contains(rates, tol))
    }

    /// True when every hull vertex of `self` lies in `other`'s hull.
    pub fn is_inside(&self, other: &RateRegion, tol: f64) -> Result<bool> {
        let outer = other.hull()?;
        Ok(self
            .hull()?
            .vertex_coords()
            .iter()
            .all(|v| outer.contains(v, tol)))
    }

    /// Largest value of `Σ R_r` over the sampled points.
    pub fn max_sum_rate(&self) -> f64 {
        self.points
            .iter()
            .map(|p| p.rates.iter().sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// One row per point: assignment code (0 when not applicable), powers,
    /// rates and a 0/1 hull-vertex flag.
    pub fn to_csv(&self) -> CsvTable {
        let k = self.users;
        let mut header = vec!["assignment".to_string()];
        header.extend((1..=k).map(|i| format!("P{i}")));
        header.extend((1..=k).map(|i| format!("R{i}")));
        header.push("is_hull_vertex".into());
        let refs: Vec<&str> = header.iter().map(String::as_str).collect();
        let mut t = CsvTable::new(&refs)
            .with_meta("method", self.method)
            .with_meta("K", k)
            .with_meta("points", self.points.len());
        let mut is_vertex = vec![false; self.points.len()];
        if let Some(h) = &self.hull {
            for &v in h.vertices() {
                is_vertex[v] = true;
            }
        }
        for (p, v) in self.points.iter().zip(is_vertex) {
            let code = p.assignment.map_or(0, |a| self.assignments[a].code());
            let mut row = vec![code as f64];
            row.extend(&p.powers);
            row.extend(&p.rates);
            row.push(if v { 1.0 } else { 0.0 });
            t.push_row(row);
        }
        t
    }
}

/// Sweeps the power simplex `Σ P_k ≤ P` on a grid with `resolution` points
/// per axis. AP-NOMA takes the union over all `K!` delay assignments.
pub fn region(scenario: &Scenario, method: Method, resolution: usize) -> Result<RateRegion> {
    if resolution < 11 {
        return Err(Error::InvalidParameter(format!(
            "grid resolution must be at least 11, got {resolution}"
        )));
    }
    let k = scenario.users.len();
    let m = resolution - 1;
    let p = scenario.total_power;
    let grid = simplex_grid(k, m);
    let assignments = match method {
        Method::ApNoma => Assignment::all(k),
        _ => vec![Assignment::identity(k)],
    };
    let jobs: Vec<(usize, &Vec<usize>)> = (0..assignments.len())
        .flat_map(|a| grid.iter().map(move |g| (a, g)))
        .collect();
    let points = jobs
        .par_iter()
        .map(|&(a, idx)| {
            let powers: Vec<f64> = idx.iter().map(|&i| p * i as f64 / m as f64).collect();
            let rates = scenario.rates(method, &powers, &assignments[a])?;
            Ok(RatePoint {
                powers,
                rates,
                assignment: (method == Method::ApNoma).then_some(a),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    RateRegion::from_points(method, k, assignments, points)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn users(s: &[f64]) -> Vec<UserChannel> {
        sort_users(s).unwrap()
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert_eq!("AP-NOMA".parse::<Method>().unwrap(), Method::ApNoma);
        assert!("oma".parse::<Method>().is_err());
    }

    #[test]
    fn pnoma_examples() {
        let u = users(&[0.1, 1.0]);
        let r = pnoma_rates(&u, &[10.0, 0.0], 10.0).unwrap();
        assert!((r[0] - 0.5 * 101f64.log2()).abs() < 1e-12);
        assert!((r[0] - 3.3291).abs() < 1e-4);
        assert_eq!(r[1], 0.0);
        assert_eq!(pnoma_rates(&u, &[0.0, 0.0], 10.0).unwrap(), vec![0.0, 0.0]);
        assert!(matches!(
            pnoma_rates(&u, &[6.0, 5.0], 10.0),
            Err(Error::Budget { .. })
        ));
        assert!(pnoma_rates(&u, &[-1.0, 5.0], 10.0).is_err());
        let unsorted = [u[1], u[0]];
        assert!(pnoma_rates(&unsorted, &[1.0, 1.0], 10.0).is_err());

        let eq = users(&[1.0, 1.0]);
        for i in 0..=10 {
            let p1 = i as f64;
            let r = pnoma_rates(&eq, &[p1, 10.0 - p1], 10.0).unwrap();
            assert!((r[0] + r[1] - 0.5 * 11f64.log2()).abs() < 1e-12);
        }
    }

    #[test]
    fn apnoma_examples() {
        let rect = OverallPulse::new(&Pulse::rect(1.0).unwrap());
        let u = users(&[0.1, 1.0]);
        let id = Assignment::identity(2);
        let r = apnoma_rates(&u, &[5.0, 5.0], 10.0, &rect, &[0.0, 0.5], &id).unwrap();
        let want = 0.5 * (1.0f64 + 5.0 / (0.5 * 5.0 + 1.0)).log2();
        assert!((r[1] - want).abs() < 1e-12);
        assert!((r[1] - 0.6399).abs() < 2e-4);
        assert!((r[0] - 0.5 * 51f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn synchronous_and_orthogonal_limits() {
        let s = [0.1, 0.4, 1.0];
        let pw = [2.0, 3.0, 4.0];
        let ones = vec![vec![1.0; 3]; 3];
        let zeros = vec![vec![0.0; 3]; 3];
        let p = pnoma_rates(&users(&s), &pw, 10.0).unwrap();
        let t = tnoma_rates(&users(&s), &pw, 10.0).unwrap();
        assert_eq!(rates_with_coefficients(&s, &pw, &ones), p);
        assert_eq!(rates_with_coefficients(&s, &pw, &zeros), t);
    }

    #[test]
    fn tnoma_examples() {
        let r = tnoma_rates(&users(&[0.1, 1.0]), &[5.0, 5.0], 10.0).unwrap();
        assert!((r[0] - 0.5 * 51f64.log2()).abs() < 1e-12 && (r[1] - 0.5 * 6f64.log2()).abs() < 1e-12);
        assert!((r[0] - 2.8361).abs() < 2e-4 && (r[1] - 1.2925).abs() < 2e-4);
        let r = tnoma_rates(&users(&[0.1, 1.0]), &[0.0, 10.0], 10.0).unwrap();
        assert_eq!(r[0], 0.0);
        let r = tnoma_rates(&users(&[1.0, 1.0]), &[5.0, 5.0], 10.0).unwrap();
        assert!(r[0] + r[1] > 0.5 * 11f64.log2());
    }

    #[test]
    fn assignments_enumerate_permutations() {
        let all = Assignment::all(3);
        assert_eq!(all.len(), 6);
        assert_eq!(all[0].as_slice(), &[0, 1, 2]);
        assert_eq!(all[5].as_slice(), &[2, 1, 0]);
        assert_eq!(all[1].code(), 132);
        assert_eq!(Assignment::all(1).len(), 1);
        assert!(Assignment::new(vec![0, 0]).is_err());
        let a = Assignment::new(vec![2, 0, 1]).unwrap();
        assert_eq!(a.user_delays(&[0.0, 0.3, 0.7]), vec![0.3, 0.7, 0.0]);
    }

    #[test]
    fn zero_power_collapse_table() {
        let d = [0.0, 0.3, 0.7];
        let cases = [
            ([0.0, 5.0, 5.0], [None, Some(0.0), Some(0.4)]),
            ([5.0, 0.0, 5.0], [Some(0.0), None, Some(0.7)]),
            ([5.0, 5.0, 0.0], [Some(0.0), Some(0.3), None]),
        ];
        for (p, want) in cases {
            let got = active_delays(&d, &p, 10.0);
            for (g, w) in got.iter().zip(want) {
                match (g, w) {
                    (None, None) => {}
                    (Some(a), Some(b)) => assert!((a - b).abs() < 1e-15),
                    _ => panic!("{got:?}"),
                }
            }
        }
    }

    #[test]
    fn simplex_grid_counts() {
        assert_eq!(simplex_grid(2, 4).len(), 15);
        assert_eq!(simplex_grid(3, 60).len(), 61 * 62 * 63 / 6);
        assert!(simplex_grid(3, 5).iter().all(|v| v.iter().sum::<usize>() <= 5));
    }

    #[test]
    fn tnoma_axis_intercepts() {
        let sc = Scenario::new(&[0.1, 1.0], 10.0, &Pulse::rect(1.0).unwrap(), &[0.0, 0.5], 8).unwrap();
        let reg = region(&sc, Method::TNoma, 21).unwrap();
        let v = reg.hull_vertices().unwrap();
        let has = |x: f64, y: f64| v.iter().any(|p| (p[0] - x).abs() < 1e-12 && (p[1] - y).abs() < 1e-12);
        assert!(has(0.5 * 101f64.log2(), 0.0));
        assert!(has(0.0, 0.5 * 11f64.log2()));
        assert!(region(&sc, Method::TNoma, 5).is_err());
    }

    #[test]
    fn eigen_channel_equal_split_matches_closed_form() {
        let sc = Scenario::new(&[0.1, 1.0], 10.0, &Pulse::rect(1.0).unwrap(), &[0.0, 0.5], 16).unwrap();
        let via = tnoma_rates_via_eigen(&sc, &PowerAllocation::PerUser(vec![4.0, 6.0])).unwrap();
        let direct = tnoma_rates(sc.users(), &[4.0, 6.0], 10.0).unwrap();
        for (a, b) in via.iter().zip(&direct) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn duplicate_delays_rejected() {
        let p = Pulse::rect(1.0).unwrap();
        assert!(matches!(
            Scenario::new(&[0.1, 1.0], 10.0, &p, &[0.0, 0.0], 4),
            Err(Error::DegenerateProfile(_))
        ));
    }

    #[test]
    fn region_csv_marks_hull_vertices() {
        let sc = Scenario::new(&[0.1, 1.0], 10.0, &Pulse::rect(1.0).unwrap(), &[0.0, 0.5], 4).unwrap();
        let reg = region(&sc, Method::ApNoma, 11).unwrap();
        let t = reg.to_csv();
        assert_eq!(t.meta("method"), Some("apnoma"));
        assert_eq!(t.rows.len(), 2 * 66);
        let flagged = t.column("is_hull_vertex").unwrap().iter().filter(|&&f| f == 1.0).count();
        assert_eq!(flagged, reg.hull().unwrap().vertices().len());
        assert!(t.column("assignment").unwrap().iter().all(|&c| c == 12.0 || c == 21.0));
    }
}
