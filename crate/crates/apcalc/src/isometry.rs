//! (m,q)-isometry verification for self-maps of finite metric spaces and for
//! linear maps on normed rational spaces, the `rho_T` semi-distance, and the
//! power / gcd / product theorems.
//!
//! A map is an (m,q)-isometry exactly when every pair trace
//! `(d(T^n x, T^n y)^q)` is a progression of order `m - 1`. Finite spaces
//! check all ordered point pairs; normed mode samples standard basis pairs
//! plus a deterministic set of random rational vectors. With the Euclidean
//! norm and even integer `q` the traces are rational and every check is
//! exact; other norms and exponents run under the approximate-mode tolerance
//! policy.

use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::diff::Sequence;
use crate::error::{Error, Result};
use crate::exact::{binomial, factorial, rational_pow, Int, Rational};
use crate::matrix::{ExactMatrix, GaussianVector};
use crate::power::{
    classify, PositiveSequence, PowerVariant, ScalarReport, DEFAULT_APPROX_TOLERANCE,
};
use crate::seqops::{decimate, diagonal, DoubleSequence};

/// Norm selector for normed mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Norm {
    L1,
    /// Euclidean norm; squared norms of rational vectors are rational.
    L2,
    LInf,
    /// General p-norm, `p >= 1`.
    Lp(f64),
}

/// Finite metric space given by its distance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace {
    dist: Vec<Vec<Rational>>,
}

impl FiniteMetricSpace {
    /// Validates all four metric axioms exhaustively before accepting.
    pub fn new(dist: Vec<Vec<Rational>>) -> Result<Self> {
        validate_metric(&dist)?;
        Ok(FiniteMetricSpace { dist })
    }

    pub fn points(&self) -> usize {
        self.dist.len()
    }

    pub fn distance(&self, x: usize, y: usize) -> &Rational {
        &self.dist[x][y]
    }
}

/// Checks squareness, zero diagonal, off-diagonal positivity, symmetry and
/// the triangle inequality; reports the first violated axiom with indices.
pub fn validate_metric(dist: &[Vec<Rational>]) -> Result<()> {
    let p = dist.len();
    if p == 0 {
        return Err(Error::InvalidInput("metric space must have at least one point".into()));
    }
    for (i, row) in dist.iter().enumerate() {
        if row.len() != p {
            return Err(Error::InvalidInput(format!(
                "distance matrix is not square: row {i} has {} entries, expected {p}",
                row.len()
            )));
        }
    }
    for i in 0..p {
        if !Zero::is_zero(&dist[i][i]) {
            return Err(Error::InvalidInput(format!(
                "metric axiom violated: d({i},{i}) = {} is nonzero",
                dist[i][i]
            )));
        }
        for j in 0..p {
            if i != j && !Signed::is_positive(&dist[i][j]) {
                return Err(Error::InvalidInput(format!(
                    "metric axiom violated: d({i},{j}) = {} is not positive",
                    dist[i][j]
                )));
            }
            if dist[i][j] != dist[j][i] {
                return Err(Error::InvalidInput(format!(
                    "metric axiom violated: d({i},{j}) != d({j},{i})"
                )));
            }
        }
    }
    for i in 0..p {
        for j in 0..p {
            for k in 0..p {
                if dist[i][k] > (&dist[i][j] + &dist[j][k]) {
                    return Err(Error::InvalidInput(format!(
                        "triangle inequality violated at ({i},{j},{k}): \
                         d({i},{k}) > d({i},{j}) + d({j},{k})"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// A self-map together with the space it acts on.
#[derive(Debug, Clone)]
pub enum System {
    /// Total map on a finite metric space, given as a lookup table.
    Metric { space: FiniteMetricSpace, map: Vec<usize> },
    /// Linear map on `Q^dim` (Gaussian-rational entries) with a chosen norm.
    Normed { operator: ExactMatrix, norm: Norm },
}

impl System {
    pub fn metric(space: FiniteMetricSpace, map: Vec<usize>) -> Result<Self> {
        if map.len() != space.points() {
            return Err(Error::InvalidInput(format!(
                "map table has {} entries for {} points",
                map.len(),
                space.points()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&t| t >= space.points()) {
            return Err(Error::InvalidInput(format!(
                "map target {bad} is outside the point set"
            )));
        }
        Ok(System::Metric { space, map })
    }

    pub fn normed(operator: ExactMatrix, norm: Norm) -> Self {
        System::Normed { operator, norm }
    }

    /// The same space under the `k`-th iterate of the map.
    pub fn power(&self, k: usize) -> System {
        match self {
            System::Metric { space, map } => {
                let mut table: Vec<usize> = (0..space.points()).collect();
                for _ in 0..k {
                    table = table.iter().map(|&x| map[x]).collect();
                }
                System::Metric { space: space.clone(), map: table }
            }
            System::Normed { operator, norm } => {
                System::Normed { operator: operator.matpow(k), norm: *norm }
            }
        }
    }
}

/// A sampled pair of arguments for the trace sequences.
#[derive(Debug, Clone, PartialEq)]
pub enum Pair {
    Points(usize, usize),
    Vectors(GaussianVector, GaussianVector),
}

impl Pair {
    /// Compact deterministic label for reports.
    pub fn label(&self) -> String {
        match self {
            Pair::Points(x, y) => format!("({x},{y})"),
            Pair::Vectors(x, y) => {
                let fmt = |v: &GaussianVector| {
                    let parts: Vec<String> = v.0.iter().map(|c| c.to_string()).collect();
                    format!("({})", parts.join(","))
                };
                format!("{}~{}", fmt(x), fmt(y))
            }
        }
    }
}

/// Trace sequence of one pair, exact or approximate.
#[derive(Debug, Clone, PartialEq)]
pub enum TraceSequence {
    Exact(Sequence<Rational>),
    Approx(Sequence<f64>),
}

impl TraceSequence {
    pub fn len(&self) -> usize {
        match self {
            TraceSequence::Exact(s) => s.len(),
            TraceSequence::Approx(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, TraceSequence::Exact(_))
    }

    pub fn analyze(&self, h_max: usize, min_windows: usize) -> Result<ScalarReport> {
        match self {
            TraceSequence::Exact(s) => {
                Ok(ScalarReport::Exact(crate::diff::certified_order(s, h_max, min_windows)?))
            }
            TraceSequence::Approx(s) => {
                Ok(ScalarReport::Approx(crate::diff::certified_order(s, h_max, min_windows)?))
            }
        }
    }

    pub fn decimate(&self, d: usize) -> Result<TraceSequence> {
        Ok(match self {
            TraceSequence::Exact(s) => TraceSequence::Exact(decimate(s, d)?),
            TraceSequence::Approx(s) => TraceSequence::Approx(decimate(s, d)?),
        })
    }

    /// Conversion for proper-order reduction; `None` if any value is zero.
    pub fn to_positive(&self) -> Option<PositiveSequence> {
        match self {
            TraceSequence::Exact(s) => {
                PositiveSequence::from_rationals(s.elements().to_vec()).ok()
            }
            TraceSequence::Approx(s) => {
                PositiveSequence::from_floats(s.elements().to_vec(), s.tolerance()).ok()
            }
        }
    }
}

fn norm_value(v: &GaussianVector, norm: Norm) -> f64 {
    match norm {
        Norm::L1 => v.norm_f64(1.0),
        Norm::L2 => v.norm_f64(2.0),
        Norm::LInf => v.norm_f64(f64::INFINITY),
        Norm::Lp(p) => v.norm_f64(p),
    }
}

/// The trace `(d(T^n x, T^n y)^q)_(n < horizon)` of one pair. Zeros are
/// allowed (colliding orbits). Exact whenever the values are rational:
/// integer `q` on a metric space, or the Euclidean norm with even `q`.
pub fn pair_trace(system: &System, pair: &Pair, q: &Rational, horizon: usize) -> Result<TraceSequence> {
    if horizon < 2 {
        return Err(Error::InsufficientData("trace horizon must be at least 2".into()));
    }
    if !Signed::is_positive(q) {
        return Err(Error::InvalidInput(format!("exponent must be positive, got {q}")));
    }
    match (system, pair) {
        (System::Metric { space, map }, Pair::Points(x, y)) => {
            if *x >= space.points() || *y >= space.points() {
                return Err(Error::InvalidInput("pair indices outside the point set".into()));
            }
            let mut dists = Vec::with_capacity(horizon);
            let (mut cx, mut cy) = (*x, *y);
            for _ in 0..horizon {
                dists.push(space.distance(cx, cy).clone());
                cx = map[cx];
                cy = map[cy];
            }
            if q.is_integer() {
                let e = q.to_integer().to_u64().unwrap_or(u64::MAX);
                let values = dists.iter().map(|d| rational_pow(d, e)).collect();
                Ok(TraceSequence::Exact(Sequence::exact(values)?))
            } else {
                let qf = q.to_f64().unwrap_or(f64::NAN);
                let values = dists
                    .iter()
                    .map(|d| d.to_f64().unwrap_or(f64::INFINITY).powf(qf))
                    .collect();
                Ok(TraceSequence::Approx(Sequence::new(values, DEFAULT_APPROX_TOLERANCE)?))
            }
        }
        (System::Normed { operator, norm }, Pair::Vectors(x, y)) => {
            if x.dim() != operator.dim() || y.dim() != operator.dim() {
                return Err(Error::InvalidInput("vector dimension mismatch".into()));
            }
            let mut w = x.sub(y);
            // Euclidean norm with even q stays rational: d^q = (|.|^2)^(q/2).
            let exact_case = *norm == Norm::L2
                && q.is_integer()
                && (q.to_integer() % Int::from(2)).is_zero();
            if exact_case {
                let half = (q / Rational::from(Int::from(2))).to_integer();
                let e = half.to_u64().unwrap_or(u64::MAX);
                let mut values = Vec::with_capacity(horizon);
                for _ in 0..horizon {
                    values.push(rational_pow(&w.norm_sq(), e));
                    w = operator.apply(&w);
                }
                Ok(TraceSequence::Exact(Sequence::exact(values)?))
            } else {
                let qf = q.to_f64().unwrap_or(f64::NAN);
                let mut values = Vec::with_capacity(horizon);
                for _ in 0..horizon {
                    values.push(norm_value(&w, *norm).powf(qf));
                    w = operator.apply(&w);
                }
                Ok(TraceSequence::Approx(Sequence::new(values, DEFAULT_APPROX_TOLERANCE)?))
            }
        }
        _ => Err(Error::InvalidInput(
            "pair kind does not match the system kind".into(),
        )),
    }
}

/// Default pair sample: every ordered pair on a finite space; standard basis
/// pairs plus 32 seeded random rational vector pairs in normed mode.
pub fn default_pairs(system: &System) -> Vec<Pair> {
    match system {
        System::Metric { space, .. } => {
            let p = space.points();
            (0..p)
                .flat_map(|x| (0..p).map(move |y| Pair::Points(x, y)))
                .collect()
        }
        System::Normed { operator, .. } => {
            let d = operator.dim();
            let mut pairs = Vec::new();
            for i in 0..d {
                pairs.push(Pair::Vectors(GaussianVector::zeros(d), GaussianVector::basis(d, i)));
            }
            for i in 0..d {
                for j in (i + 1)..d {
                    pairs.push(Pair::Vectors(GaussianVector::basis(d, i), GaussianVector::basis(d, j)));
                }
            }
            let mut rng = ChaCha8Rng::seed_from_u64(0x9a5e_c0de);
            for _ in 0..32 {
                let v = |rng: &mut ChaCha8Rng| {
                    GaussianVector::from_rationals(
                        (0..d)
                            .map(|_| {
                                Rational::new(
                                    Int::from(rng.gen_range(-4i64..=4)),
                                    Int::from(rng.gen_range(1i64..=4)),
                                )
                            })
                            .collect(),
                    )
                };
                let x = v(&mut rng);
                let y = v(&mut rng);
                pairs.push(Pair::Vectors(x, y));
            }
            pairs
        }
    }
}

/// Per-pair outcome inside an [`IsometryReport`].
#[derive(Debug, Clone)]
pub struct PairOutcome {
    pub pair: Pair,
    /// Certified order of the pair trace.
    pub order: usize,
    pub strict: bool,
    pub exact: bool,
}

/// Aggregate verification result for one (m, q) claim.
#[derive(Debug, Clone)]
pub struct IsometryReport {
    pub m: usize,
    pub q: Rational,
    pub horizon: usize,
    pub pairs_checked: usize,
    pub per_pair: Vec<PairOutcome>,
    /// `1 + max` certified trace order over the sample.
    pub aggregate_m: usize,
    /// Index into `per_pair` of a trace attaining order `m - 1` strictly.
    pub strict_witness: Option<usize>,
    /// Proper reduction `(m0, q0)` obtained from the witness trace, when a
    /// strictly positive witness exists.
    pub proper: Option<(usize, Rational)>,
    /// Pairs whose trace certified a strict order >= 1 on a finite space:
    /// bounded traces cannot extend to an unbounded progression, so the
    /// horizon is flagged as unrepresentative.
    pub finiteness_flags: Vec<usize>,
}

/// Options shared by the verification entry points.
#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub min_windows: usize,
    /// Bound on the `1/k` candidate exponents tried during proper reduction.
    pub reduction_depth: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { min_windows: 1, reduction_depth: 4 }
    }
}

fn analyze_pairs(
    system: &System,
    pairs: &[Pair],
    m: usize,
    q: &Rational,
    horizon: usize,
    opts: &VerifyOptions,
) -> Result<Vec<(PairOutcome, TraceSequence)>> {
    // Order m - 1 must be testable, otherwise the horizon cannot decide.
    if horizon < m + opts.min_windows {
        return Err(Error::Inconclusive(format!(
            "horizon {horizon} cannot test order {} with {} window(s)",
            m - 1,
            opts.min_windows
        )));
    }
    let mut out = Vec::with_capacity(pairs.len());
    for pair in pairs {
        let trace = pair_trace(system, pair, q, horizon)?;
        let report = trace.analyze(m - 1, opts.min_windows).map_err(|e| match e {
            Error::NotAnAp { .. } => Error::ClaimViolated(format!(
                "pair {} trace exceeds order {} on horizon {horizon}",
                pair.label(),
                m - 1
            )),
            Error::Inconclusive(msg) => {
                Error::Inconclusive(format!("pair {}: {msg}", pair.label()))
            }
            other => other,
        })?;
        out.push((
            PairOutcome {
                pair: pair.clone(),
                order: report.order(),
                strict: report.strict(),
                exact: trace.is_exact(),
            },
            trace,
        ));
    }
    Ok(out)
}

/// Reduces the witness trace to its proper isometry pair `(m0, q0)` by
/// classifying it against the exponents `{1, 1/2, ..., 1/depth}`.
fn proper_reduction(
    trace: &TraceSequence,
    q: &Rational,
    opts: &VerifyOptions,
) -> Option<(usize, Rational)> {
    let positive = trace.to_positive()?;
    let candidates: Vec<Rational> = (1..=opts.reduction_depth as i64)
        .map(|k| Rational::new(Int::from(1), Int::from(k)))
        .collect();
    let h_max = positive.len().checked_sub(1 + opts.min_windows)?;
    let cls = classify(&positive, &candidates, h_max, DEFAULT_APPROX_TOLERANCE, opts.min_windows)
        .ok()?;
    match cls.variant {
        PowerVariant::Proper(p) => Some((p.order + 1, q * &p.exponent)),
        PowerVariant::Constant => Some((1, q.clone())),
        PowerVariant::NeverAp { .. } => None,
    }
}

/// Verifies that every sampled pair trace certifies order `<= m - 1`,
/// assembles the aggregate report, and attaches the strict witness when some
/// pair attains `m - 1` exactly.
pub fn check_mq_isometry(
    system: &System,
    m: usize,
    q: &Rational,
    horizon: usize,
    pairs: Option<Vec<Pair>>,
    opts: &VerifyOptions,
) -> Result<IsometryReport> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be at least 1".into()));
    }
    let pairs = pairs.unwrap_or_else(|| default_pairs(system));
    if pairs.is_empty() {
        return Err(Error::InvalidInput("pair sample must be nonempty".into()));
    }
    let analyzed = analyze_pairs(system, &pairs, m, q, horizon, opts)?;

    let aggregate_m = 1 + analyzed.iter().map(|(o, _)| o.order).max().unwrap_or(0);
    let strict_witness = analyzed
        .iter()
        .position(|(o, _)| o.order == m - 1 && o.strict);
    let finiteness_flags: Vec<usize> = match system {
        System::Metric { .. } => analyzed
            .iter()
            .enumerate()
            .filter(|(_, (o, _))| o.order >= 1 && o.strict)
            .map(|(i, _)| i)
            .collect(),
        System::Normed { .. } => Vec::new(),
    };
    let proper = strict_witness
        .and_then(|w| proper_reduction(&analyzed[w].1, q, opts));

    Ok(IsometryReport {
        m,
        q: q.clone(),
        horizon,
        pairs_checked: analyzed.len(),
        per_pair: analyzed.into_iter().map(|(o, _)| o).collect(),
        aggregate_m,
        strict_witness,
        proper,
        finiteness_flags,
    })
}

/// Value of `rho_T(x, y)^q`, exact when the trace is.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarValue {
    Exact(Rational),
    Approx(f64),
}

impl ScalarValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            ScalarValue::Exact(r) => r.to_f64().unwrap_or(f64::INFINITY),
            ScalarValue::Approx(v) => *v,
        }
    }
}

/// The semi-distance attached to an (m,q)-isometry at one pair.
#[derive(Debug, Clone)]
pub struct RhoReport {
    /// `rho^q`: the alternating binomial sum over the first `m` trace values.
    pub rho_q: ScalarValue,
    /// `rho` itself, as a float.
    pub rho: f64,
    /// Whether `rho^q` equals `(m-1)! * gamma_(m-1)` of the fitted trace.
    pub leading_match: bool,
}

/// Computes `rho_T(x,y) = (sum_k (-1)^(m-1-k) C(m-1,k) d(T^k x, T^k y)^q)^(1/q)`
/// and cross-checks it against the fitted leading coefficient of the trace.
pub fn rho(system: &System, m: usize, q: &Rational, pair: &Pair) -> Result<RhoReport> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be at least 1".into()));
    }
    // Horizon m + 3 leaves room to certify order m - 1 with three windows.
    let horizon = m + 3;
    let trace = pair_trace(system, pair, q, horizon)?;
    let qf = q.to_f64().unwrap_or(f64::NAN);

    let (rho_q, leading_match) = match &trace {
        TraceSequence::Exact(seq) => {
            let mut inner = Rational::zero();
            for k in 0..m {
                let mut c = Rational::from(binomial(m as u64 - 1, k as u64));
                if (m - 1 - k) % 2 == 1 {
                    c = -c;
                }
                inner += c * &seq.elements()[k];
            }
            if inner.is_negative() {
                return Err(Error::HypothesisViolation(format!(
                    "inner sum {inner} is negative: the map is not an ({m},{q})-isometry \
                     on pair {}",
                    pair.label()
                )));
            }
            let report = crate::diff::certified_order(seq, m - 1, 1).map_err(|e| {
                Error::HypothesisViolation(format!(
                    "trace of pair {} does not certify order {}: {e}",
                    pair.label(),
                    m - 1
                ))
            })?;
            let gamma = &report.monomial.as_ref().expect("divisible").coefficients;
            let lead = gamma.get(m - 1).cloned().unwrap_or_else(Rational::zero);
            let expected = lead * Rational::from(factorial(m as u64 - 1));
            (ScalarValue::Exact(inner.clone()), inner == expected)
        }
        TraceSequence::Approx(seq) => {
            let mut inner = 0.0f64;
            let mut budget = 0.0f64;
            for k in 0..m {
                let c = binomial(m as u64 - 1, k as u64).to_f64().unwrap_or(f64::INFINITY);
                let v = seq.elements()[k];
                budget += c * v.abs();
                if (m - 1 - k) % 2 == 1 {
                    inner -= c * v;
                } else {
                    inner += c * v;
                }
            }
            let tol = seq.tolerance().max(DEFAULT_APPROX_TOLERANCE);
            if inner < -tol * budget {
                return Err(Error::HypothesisViolation(format!(
                    "inner sum {inner} is negative beyond tolerance on pair {}",
                    pair.label()
                )));
            }
            let inner = inner.max(0.0);
            let report = crate::diff::certified_order(seq, m - 1, 1).map_err(|e| {
                Error::HypothesisViolation(format!(
                    "trace of pair {} does not certify order {}: {e}",
                    pair.label(),
                    m - 1
                ))
            })?;
            let gamma = &report.monomial.as_ref().expect("divisible").coefficients;
            let lead = gamma.get(m - 1).copied().unwrap_or(0.0);
            let expected = lead * factorial(m as u64 - 1).to_f64().unwrap_or(f64::INFINITY);
            let close = (inner - expected).abs() <= tol * budget.max(1.0);
            (ScalarValue::Approx(inner), close)
        }
    };
    let rho = rho_q.to_f64().powf(1.0 / qf);
    Ok(RhoReport { rho_q, rho, leading_match })
}

/// Exact triangle-inequality test for q = 2 roots: `sqrt(a) <= sqrt(b) + sqrt(c)`
/// iff `a <= b + c` or `(a - b - c)^2 <= 4bc`.
pub fn sqrt_triangle_holds(a: &Rational, b: &Rational, c: &Rational) -> bool {
    let s = a - b - c;
    if !s.is_positive() {
        return true;
    }
    &s * &s <= Rational::from(Int::from(4)) * b * c
}

/// Verifies that `T^k` inherits a strict (m,q) certification, using
/// decimated traces of `T`.
pub fn verify_power_theorem(
    system: &System,
    k: usize,
    m: usize,
    q: &Rational,
    horizon: usize,
    pairs: Option<Vec<Pair>>,
    opts: &VerifyOptions,
) -> Result<IsometryReport> {
    if k == 0 {
        return Err(Error::InvalidInput("power k must be at least 1".into()));
    }
    if horizon < m + opts.min_windows {
        return Err(Error::Inconclusive(format!(
            "horizon {horizon} cannot test order {} with {} window(s)",
            m - 1,
            opts.min_windows
        )));
    }
    let pairs = pairs.unwrap_or_else(|| default_pairs(system));
    // Long base horizon so the decimated traces keep `horizon` entries.
    let base_horizon = k * (horizon - 1) + 1;
    let mut outcomes = Vec::with_capacity(pairs.len());
    for pair in &pairs {
        let base = pair_trace(system, pair, q, base_horizon)?;
        let trace = base.decimate(k)?;
        let report = trace.analyze(m - 1, opts.min_windows).map_err(|e| match e {
            Error::NotAnAp { .. } => Error::ClaimViolated(format!(
                "decimated trace of pair {} exceeds order {}",
                pair.label(),
                m - 1
            )),
            other => other,
        })?;
        outcomes.push(PairOutcome {
            pair: pair.clone(),
            order: report.order(),
            strict: report.strict(),
            exact: trace.is_exact(),
        });
    }
    let aggregate_m = 1 + outcomes.iter().map(|o| o.order).max().unwrap_or(0);
    let strict_witness = outcomes.iter().position(|o| o.order == m - 1 && o.strict);
    Ok(IsometryReport {
        m,
        q: q.clone(),
        horizon,
        pairs_checked: outcomes.len(),
        per_pair: outcomes,
        aggregate_m,
        strict_witness,
        proper: None,
        finiteness_flags: Vec::new(),
    })
}

/// Outcome of the power-gcd refinement.
#[derive(Debug, Clone)]
pub struct PowerGcdReport {
    pub e: usize,
    pub h: usize,
    /// Certification of `T^e` as an `(h, q)`-isometry on the sample.
    pub report: IsometryReport,
}

/// From `T^c` an `(m,q)`-isometry and `T^d` an `(l,q)`-isometry, certifies
/// `T^(gcd(c,d))` as a `(min(m,l), q)`-isometry on the sample.
#[allow(clippy::too_many_arguments)]
pub fn verify_power_gcd(
    system: &System,
    c: usize,
    m: usize,
    d: usize,
    l: usize,
    q: &Rational,
    horizon: usize,
    pairs: Option<Vec<Pair>>,
    opts: &VerifyOptions,
) -> Result<PowerGcdReport> {
    if c == 0 || d == 0 {
        return Err(Error::InvalidInput("powers must be at least 1".into()));
    }
    let pairs = pairs.unwrap_or_else(|| default_pairs(system));
    verify_power_theorem(system, c, m, q, horizon, Some(pairs.clone()), opts).map_err(|e| {
        match e {
            Error::ClaimViolated(msg) => {
                Error::HypothesisViolation(format!("T^{c} is not an ({m},{q})-isometry: {msg}"))
            }
            other => other,
        }
    })?;
    verify_power_theorem(system, d, l, q, horizon, Some(pairs.clone()), opts).map_err(|e| {
        match e {
            Error::ClaimViolated(msg) => {
                Error::HypothesisViolation(format!("T^{d} is not an ({l},{q})-isometry: {msg}"))
            }
            other => other,
        }
    })?;
    let e = num_integer::Integer::gcd(&c, &d);
    let h = m.min(l);
    let report = verify_power_theorem(system, e, h, q, horizon, Some(pairs), opts)?;
    Ok(PowerGcdReport { e, h, report })
}

/// Two commuting self-maps on one space, for the product theorem.
#[derive(Debug, Clone)]
pub enum ProductInput {
    Metric { space: FiniteMetricSpace, s_map: Vec<usize>, t_map: Vec<usize> },
    Normed { s: ExactMatrix, t: ExactMatrix, norm: Norm },
}

/// Outcome of the product theorem verification.
#[derive(Debug, Clone)]
pub struct ProductReport {
    /// Certified diagonal order per pair; all `<= m + n - 2`.
    pub diagonal_orders: Vec<usize>,
    /// The claimed product bound `m + n - 1`.
    pub product_m: usize,
    /// `1 + max` diagonal order: the product's aggregate certification.
    pub aggregate_m: usize,
}

/// Verifies that the product of commuting `(n,q)`- and `(m,q)`-isometries is
/// an `(m+n-1, q)`-isometry, via the pair grids
/// `a_(i,j) = d(S^i T^j x, S^i T^j y)^q` and the diagonal theorem.
pub fn verify_product_theorem(
    input: &ProductInput,
    n: usize,
    m: usize,
    q: &Rational,
    horizon: usize,
    pairs: Option<Vec<Pair>>,
    opts: &VerifyOptions,
) -> Result<ProductReport> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidInput("isometry orders must be at least 1".into()));
    }
    // Commutation is a hypothesis, never assumed.
    match input {
        ProductInput::Metric { space, s_map, t_map } => {
            if s_map.len() != space.points() || t_map.len() != space.points() {
                return Err(Error::InvalidInput("map table size mismatch".into()));
            }
            let st: Vec<usize> = (0..space.points()).map(|x| s_map[t_map[x]]).collect();
            let ts: Vec<usize> = (0..space.points()).map(|x| t_map[s_map[x]]).collect();
            if st != ts {
                return Err(Error::HypothesisViolation("maps do not commute".into()));
            }
        }
        ProductInput::Normed { s, t, .. } => {
            if s.matmul(t) != t.matmul(s) {
                return Err(Error::HypothesisViolation("operators do not commute".into()));
            }
        }
    }

    let (s_system, t_system) = match input {
        ProductInput::Metric { space, s_map, t_map } => (
            System::metric(space.clone(), s_map.clone())?,
            System::metric(space.clone(), t_map.clone())?,
        ),
        ProductInput::Normed { s, t, norm } => (
            System::normed(s.clone(), *norm),
            System::normed(t.clone(), *norm),
        ),
    };
    let pairs = pairs.unwrap_or_else(|| default_pairs(&t_system));
    // Hypotheses: S is (m,q), T is (n,q) on the sample.
    check_mq_isometry(&s_system, m, q, horizon, Some(pairs.clone()), opts).map_err(|e| {
        match e {
            Error::ClaimViolated(msg) => {
                Error::HypothesisViolation(format!("S is not an ({m},{q})-isometry: {msg}"))
            }
            other => other,
        }
    })?;
    check_mq_isometry(&t_system, n, q, horizon, Some(pairs.clone()), opts).map_err(|e| {
        match e {
            Error::ClaimViolated(msg) => {
                Error::HypothesisViolation(format!("T is not an ({n},{q})-isometry: {msg}"))
            }
            other => other,
        }
    })?;

    let bound = m + n - 2;
    if horizon < bound + 1 + opts.min_windows {
        return Err(Error::Inconclusive(format!(
            "grid size {horizon} cannot test the product bound {bound} with {} window(s)",
            opts.min_windows
        )));
    }
    let mut diagonal_orders = Vec::with_capacity(pairs.len());
    for pair in &pairs {
        let grid = pair_grid(input, pair, q, horizon)?;
        let diag = match &grid {
            GridSeq::Exact(g) => {
                let report = diagonal(g, opts.min_windows)?;
                TraceSequence::Exact(report.diagonal)
            }
            GridSeq::Approx(g) => {
                let report = diagonal(g, opts.min_windows)?;
                TraceSequence::Approx(report.diagonal)
            }
        };
        let report = diag.analyze(bound, opts.min_windows).map_err(|e| match e {
            Error::NotAnAp { .. } => Error::ClaimViolated(format!(
                "diagonal trace of pair {} exceeds order {bound}",
                pair.label()
            )),
            other => other,
        })?;
        diagonal_orders.push(report.order());
    }
    let aggregate_m = 1 + diagonal_orders.iter().copied().max().unwrap_or(0);
    Ok(ProductReport { diagonal_orders, product_m: m + n - 1, aggregate_m })
}

enum GridSeq {
    Exact(DoubleSequence<Rational>),
    Approx(DoubleSequence<f64>),
}

fn pair_grid(input: &ProductInput, pair: &Pair, q: &Rational, size: usize) -> Result<GridSeq> {
    match (input, pair) {
        (ProductInput::Metric { space, s_map, t_map }, Pair::Points(x, y)) => {
            // Row i, column j holds d(S^i T^j x, S^i T^j y)^q.
            let mut dists: Vec<Vec<Rational>> = Vec::with_capacity(size);
            let (mut tx, mut ty) = (*x, *y);
            let mut t_orbit = Vec::with_capacity(size);
            for _ in 0..size {
                t_orbit.push((tx, ty));
                tx = t_map[tx];
                ty = t_map[ty];
            }
            for i in 0..size {
                let mut row = Vec::with_capacity(size);
                for &(ox, oy) in &t_orbit {
                    let (mut sx, mut sy) = (ox, oy);
                    for _ in 0..i {
                        sx = s_map[sx];
                        sy = s_map[sy];
                    }
                    row.push(space.distance(sx, sy).clone());
                }
                dists.push(row);
            }
            if q.is_integer() {
                let e = q.to_integer().to_u64().unwrap_or(u64::MAX);
                let grid = dists
                    .into_iter()
                    .map(|row| row.into_iter().map(|d| rational_pow(&d, e)).collect())
                    .collect();
                Ok(GridSeq::Exact(DoubleSequence::exact(grid)?))
            } else {
                let qf = q.to_f64().unwrap_or(f64::NAN);
                let grid = dists
                    .into_iter()
                    .map(|row| {
                        row.into_iter()
                            .map(|d| d.to_f64().unwrap_or(f64::INFINITY).powf(qf))
                            .collect()
                    })
                    .collect();
                Ok(GridSeq::Approx(DoubleSequence::new(grid, DEFAULT_APPROX_TOLERANCE)?))
            }
        }
        (ProductInput::Normed { s, t, norm }, Pair::Vectors(x, y)) => {
            let w0 = x.sub(y);
            let exact_case = *norm == Norm::L2
                && q.is_integer()
                && (q.to_integer() % Int::from(2)).is_zero();
            let mut vectors: Vec<Vec<GaussianVector>> = Vec::with_capacity(size);
            let mut t_orbit = Vec::with_capacity(size);
            let mut w = w0;
            for _ in 0..size {
                t_orbit.push(w.clone());
                w = t.apply(&w);
            }
            for i in 0..size {
                let row: Vec<GaussianVector> = t_orbit
                    .iter()
                    .map(|v| {
                        let mut u = v.clone();
                        for _ in 0..i {
                            u = s.apply(&u);
                        }
                        u
                    })
                    .collect();
                vectors.push(row);
            }
            if exact_case {
                let e = (q / Rational::from(Int::from(2)))
                    .to_integer()
                    .to_u64()
                    .unwrap_or(u64::MAX);
                let grid = vectors
                    .into_iter()
                    .map(|row| {
                        row.into_iter().map(|v| rational_pow(&v.norm_sq(), e)).collect()
                    })
                    .collect();
                Ok(GridSeq::Exact(DoubleSequence::exact(grid)?))
            } else {
                let qf = q.to_f64().unwrap_or(f64::NAN);
                let grid = vectors
                    .into_iter()
                    .map(|row| {
                        row.into_iter()
                            .map(|v| norm_value(&v, *norm).powf(qf))
                            .collect()
                    })
                    .collect();
                Ok(GridSeq::Approx(DoubleSequence::new(grid, DEFAULT_APPROX_TOLERANCE)?))
            }
        }
        _ => Err(Error::InvalidInput("pair kind does not match the input kind".into())),
    }
}
