//! Continuous-time TASEP on `Z` (finite support) and on the ring `Z / LZ`.
//!
//! Both samplers run the same Gillespie loop: the movable particles (those
//! whose right neighbor is vacant) each ring at rate 1, so the next event is
//! exponential with rate equal to their number and the mover is uniform
//! among them.

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{SampleRng, StreamKey};

/// Finite particle configuration on `Z`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineState {
    /// Strictly increasing particle sites.
    pub positions: Vec<i64>,
    pub time: f64,
}

impl LineState {
    pub fn new(positions: Vec<i64>) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::invalid("line state needs at least one particle"));
        }
        if positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Unordered(positions));
        }
        Ok(Self { positions, time: 0.0 })
    }

    /// Height `h(x) = x + 2 #{particles right of x}`.
    ///
    /// This is the zig-zag rule anchored so that the step configuration
    /// `{-N+1, ..., 0}` has `h(x) = |x|` for `x >= -N`.
    pub fn height(&self, x: i64) -> i64 {
        let right = self.positions.len() - self.positions.partition_point(|&p| p <= x);
        x + 2 * right as i64
    }
}

/// Step initial condition truncated to `n` particles at `{-n+1, ..., 0}`.
pub fn step_line_state(n: usize) -> Result<LineState> {
    if n == 0 {
        return Err(Error::invalid("need at least one particle"));
    }
    LineState::new((0..n as i64).map(|k| k - n as i64 + 1).collect())
}

/// Periodic configuration, lifted to the universal cover.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RingState {
    pub period: usize,
    pub count: usize,
    /// `a_1 < ... < a_N < a_1 + L`; winding shows up as drift of the lift.
    pub positions: Vec<i64>,
    pub time: f64,
}

impl RingState {
    pub fn new(period: usize, positions: Vec<i64>) -> Result<Self> {
        let count = positions.len();
        if count == 0 || count >= period {
            return Err(Error::invalid(format!(
                "need 0 < N < L, got N = {count}, L = {period}"
            )));
        }
        let ordered = positions.windows(2).all(|w| w[0] < w[1]);
        if !ordered || positions[count - 1] >= positions[0] + period as i64 {
            return Err(Error::Unordered(positions));
        }
        Ok(Self { period, count, positions, time: 0.0 })
    }

    /// Step initial condition: particles at `{-N+1, ..., 0}`.
    pub fn step(period: usize, count: usize) -> Result<Self> {
        if count == 0 || count >= period {
            return Err(Error::invalid(format!(
                "need 0 < N < L, got N = {count}, L = {period}"
            )));
        }
        Self::new(period, (0..count as i64).map(|k| k - count as i64 + 1).collect())
    }

    /// Occupation vector of the ring sites `0..L`.
    pub fn occupancy(&self) -> Vec<bool> {
        let l = self.period as i64;
        let mut occ = vec![false; self.period];
        for &p in &self.positions {
            occ[p.rem_euclid(l) as usize] = true;
        }
        occ
    }
}

/// Initial periodic height for the ring step condition.
///
/// Equals `|x|` on the window `-N <= x <= L - N` and is extended with
/// `h(x + L) = h(x) + L - 2N`.
pub fn ring_initial_height(period: usize, count: usize, x: i64) -> i64 {
    let (l, n) = (period as i64, count as i64);
    let r = (x + n).rem_euclid(l) - n;
    let q = (x - r) / l;
    r.abs() + q * (l - 2 * n)
}

/// Space-time points at which heights are recorded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeightQuery {
    pub points: Vec<(i64, f64)>,
}

impl HeightQuery {
    pub fn at_time(xs: impl IntoIterator<Item = i64>, t: f64) -> Self {
        Self { points: xs.into_iter().map(|x| (x, t)).collect() }
    }

    pub fn grid(xs: &[i64], ts: &[f64]) -> Self {
        Self {
            points: ts.iter().flat_map(|&t| xs.iter().map(move |&x| (x, t))).collect(),
        }
    }

    fn check(&self, t_max: f64) -> Result<()> {
        match self.points.iter().find(|(_, t)| !(*t >= 0.0 && *t <= t_max)) {
            Some(p) => Err(Error::invalid(format!("query {p:?} outside [0, {t_max}]"))),
            None => Ok(()),
        }
    }

    /// Query indices ordered by time, stable in the original order.
    fn time_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.points.len()).collect();
        idx.sort_by(|&a, &b| self.points[a].1.total_cmp(&self.points[b].1));
        idx
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeightSample {
    pub queries: Vec<(i64, f64)>,
    pub values: Vec<i64>,
    /// `false` when a truncated line run may differ from the infinite system.
    pub valid: bool,
    pub events: u64,
}

/// Indexable set of movable particles with O(1) insert/remove/sample.
struct MovableSet {
    members: Vec<usize>,
    slot: Vec<usize>,
}

impl MovableSet {
    const NONE: usize = usize::MAX;

    fn new(n: usize) -> Self {
        Self { members: Vec::with_capacity(n), slot: vec![Self::NONE; n] }
    }

    fn set(&mut self, i: usize, movable: bool) {
        let present = self.slot[i] != Self::NONE;
        if movable && !present {
            self.slot[i] = self.members.len();
            self.members.push(i);
        } else if !movable && present {
            let s = self.slot[i];
            let last = self.members.pop().unwrap();
            if last != i {
                self.members[s] = last;
                self.slot[last] = s;
            }
            self.slot[i] = Self::NONE;
        }
    }

    fn len(&self) -> usize {
        self.members.len()
    }

    fn pick(&self, rng: &mut SampleRng) -> usize {
        self.members[rng.random_range(0..self.members.len())]
    }
}

/// Simulates TASEP on `Z` from a finite configuration.
///
/// Heights follow [`LineState::height`]. A run is flagged invalid when the
/// leftmost particle moves: that is when a truncated step condition can
/// first differ from the infinite one inside the queried window.
pub fn simulate_tasep_line(
    init: &LineState,
    t_max: f64,
    queries: &HeightQuery,
    key: StreamKey,
) -> Result<(HeightSample, LineState)> {
    if init.positions.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Unordered(init.positions.clone()));
    }
    if !(t_max >= 0.0 && t_max.is_finite()) {
        return Err(Error::invalid(format!("t_max must be finite and nonnegative, got {t_max}")));
    }
    queries.check(t_max)?;

    let mut rng = key.rng();
    let mut pos = init.positions.clone();
    let n = pos.len();
    let mut movable = MovableSet::new(n);
    for i in 0..n {
        movable.set(i, i + 1 == n || pos[i] + 1 < pos[i + 1]);
    }
    let leftmost0 = pos[0];
    let order = queries.time_order();
    let mut values = vec![0i64; queries.points.len()];
    let mut next_q = 0usize;
    let mut time = 0.0;
    let mut events = 0u64;

    let height = |pos: &[i64], x: i64| {
        let right = pos.len() - pos.partition_point(|&p| p <= x);
        x + 2 * right as i64
    };

    loop {
        // movable set is never empty on the line: the rightmost particle is free
        let rate = movable.len() as f64;
        let dt: f64 = Exp1.sample(&mut rng);
        let t_next = time + dt / rate;
        while next_q < order.len() && queries.points[order[next_q]].1 < t_next.min(f64::INFINITY)
        {
            let qi = order[next_q];
            values[qi] = height(&pos, queries.points[qi].0);
            next_q += 1;
        }
        if t_next > t_max {
            break;
        }
        time = t_next;
        let i = movable.pick(&mut rng);
        pos[i] += 1;
        events += 1;
        movable.set(i, i + 1 == n || pos[i] + 1 < pos[i + 1]);
        if i > 0 {
            movable.set(i - 1, true);
        }
    }

    let valid = pos[0] == leftmost0;
    let state = LineState { positions: pos, time: t_max };
    Ok((HeightSample { queries: queries.points.clone(), values, valid, events }, state))
}

/// Output of a ring run: final lifted state and recorded heights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RingRun {
    pub heights: HeightSample,
    pub state: RingState,
}

fn ring_height(init: &[i64], pos: &[i64], period: usize, x: i64) -> i64 {
    // each crossing of a bond y -> y + 1 with y = x (mod L) lifts h(x) by 2
    let l = period as i64;
    let crossings: i64 = init
        .iter()
        .zip(pos)
        .map(|(&a, &b)| (b - 1 - x).div_euclid(l) - (a - 1 - x).div_euclid(l))
        .sum();
    ring_initial_height(period, pos.len(), x) + 2 * crossings
}

/// Simulates TASEP on a ring of `period` sites with `count` particles started
/// from the step condition of [`RingState::step`].
pub fn simulate_tasep_ring(
    period: usize,
    count: usize,
    t_max: f64,
    queries: &HeightQuery,
    key: StreamKey,
) -> Result<RingRun> {
    let init = RingState::step(period, count)?;
    simulate_ring_from(&init, t_max, queries, key)
}

/// Ring dynamics from an arbitrary lifted configuration; heights are anchored
/// at the step profile and are only meaningful for the step start.
pub(crate) fn simulate_ring_from(
    init: &RingState,
    t_max: f64,
    queries: &HeightQuery,
    key: StreamKey,
) -> Result<RingRun> {
    if !(t_max >= 0.0 && t_max.is_finite()) {
        return Err(Error::invalid(format!("t_max must be finite and nonnegative, got {t_max}")));
    }
    queries.check(t_max)?;
    let (period, n) = (init.period, init.count);
    let l = period as i64;
    let mut rng = key.rng();
    let mut pos = init.positions.clone();
    let mut movable = MovableSet::new(n);
    let free = |pos: &[i64], i: usize| {
        let next = if i + 1 == n { pos[0] + l } else { pos[i + 1] };
        pos[i] + 1 < next
    };
    for i in 0..n {
        movable.set(i, free(&pos, i));
    }
    let order = queries.time_order();
    let mut values = vec![0i64; queries.points.len()];
    let mut next_q = 0usize;
    let mut time = 0.0;
    let mut events = 0u64;

    loop {
        let rate = movable.len() as f64;
        let dt: f64 = Exp1.sample(&mut rng);
        let t_next = time + dt / rate;
        while next_q < order.len() && queries.points[order[next_q]].1 < t_next {
            let qi = order[next_q];
            values[qi] = ring_height(&init.positions, &pos, period, queries.points[qi].0);
            next_q += 1;
        }
        if t_next > t_max {
            break;
        }
        time = t_next;
        let i = movable.pick(&mut rng);
        pos[i] += 1;
        events += 1;
        movable.set(i, free(&pos, i));
        let prev = if i == 0 { n - 1 } else { i - 1 };
        movable.set(prev, true);
    }

    let state = RingState { period, count: n, positions: pos, time: t_max };
    Ok(RingRun {
        heights: HeightSample { queries: queries.points.clone(), values, valid: true, events },
        state,
    })
}
