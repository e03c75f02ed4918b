//! Globally adaptive 21-point Gauss-Kronrod integration on a list of
//! initial panels.
//!
//! Samples may themselves be integrals (nested integration): each sample
//! carries its own error estimate, which is propagated through the
//! Kronrod weights but kept apart from the local rule error that drives
//! bisection. Panel selection and summation order depend only on the
//! integrand values, so results are bit-identical whether node
//! evaluations run sequentially or on the rayon pool.

/// Kronrod abscissae on `[0, 1]`, descending; odd indices are the Gauss
/// nodes.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_208_814_318,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];

/// 10-point Gauss weights for `XGK[1], XGK[3], …, XGK[9]`.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

pub(crate) const NODES: usize = 21;

/// Ten-point Gauss-Legendre rule on `[a, b]`, without an error estimate.
pub(crate) fn gauss10<F>(f: &F, a: f64, b: f64) -> Sample
where
    F: Fn(f64) -> Sample,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut out = Sample::default();
    for j in 0..5 {
        let x = h * XGK[2 * j + 1];
        for s in [f(c - x), f(c + x)] {
            out.value += WG[j] * s.value;
            out.mass += WG[j] * s.mass;
            out.evals += s.evals;
        }
    }
    out.value *= h;
    out.mass *= h.abs();
    out
}

/// One integrand value with the error it already carries.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct Sample {
    pub value: f64,
    pub error: f64,
    /// `∫|f|` over the inner variables; `|value|` for a plain evaluation.
    pub mass: f64,
    pub evals: u64,
}

impl Sample {
    #[inline]
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            error: 0.0,
            mass: value.abs(),
            evals: 1,
        }
    }

    /// The sample multiplied by a Jacobian `w`.
    #[inline]
    pub fn scaled(self, w: f64) -> Self {
        Self {
            value: self.value * w,
            error: self.error * w.abs(),
            mass: self.mass * w.abs(),
            evals: self.evals,
        }
    }
}

/// Stopping rule: `error ≤ max(abs, rel·|I|, rel_abs·∫|f|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Tol {
    pub abs: f64,
    pub rel: f64,
    pub rel_abs: f64,
}

impl Tol {
    pub fn absolute(abs: f64) -> Self {
        Self {
            abs,
            rel: 0.0,
            rel_abs: 0.0,
        }
    }

    fn target(&self, value: f64, resabs: f64) -> f64 {
        self.abs
            .max(self.rel * value.abs())
            .max(self.rel_abs * resabs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Limits {
    pub max_panels: usize,
    pub max_evals: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct Outcome {
    pub value: f64,
    /// Local rule error summed over panels.
    pub rule_error: f64,
    /// Error inherited from the samples.
    pub inner_error: f64,
    /// `∫|f|` over all nested variables.
    pub resabs: f64,
    pub evals: u64,
    pub converged: bool,
}

impl Outcome {
    pub fn error(&self) -> f64 {
        self.rule_error + self.inner_error
    }

    pub fn sample(&self) -> Sample {
        Sample {
            value: self.value,
            error: self.error(),
            mass: self.resabs,
            evals: self.evals,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    inner: f64,
    resabs: f64,
    evals: u64,
}

#[inline]
fn abscissae(a: f64, b: f64) -> [f64; NODES] {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut x = [c; NODES];
    for j in 0..10 {
        x[2 * j] = c - h * XGK[j];
        x[2 * j + 1] = c + h * XGK[j];
    }
    x
}

/// Applies the rule to samples laid out as produced by [`abscissae`].
fn combine(a: f64, b: f64, s: &[Sample]) -> Panel {
    let h = 0.5 * (b - a);
    let fc = s[20].value;
    let mut resk = WGK[10] * fc;
    let mut resg = 0.0;
    let mut resabs = WGK[10] * s[20].mass;
    let mut inner = WGK[10] * s[20].error;
    let mut evals = s[20].evals;
    for j in 0..10 {
        let (f1, f2) = (s[2 * j].value, s[2 * j + 1].value);
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (s[2 * j].mass + s[2 * j + 1].mass);
        inner += WGK[j] * (s[2 * j].error + s[2 * j + 1].error);
        evals += s[2 * j].evals + s[2 * j + 1].evals;
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let reskh = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - reskh).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((s[2 * j].value - reskh).abs() + (s[2 * j + 1].value - reskh).abs());
    }
    let hab = h.abs();
    resasc *= hab;
    let resabs = resabs * hab;
    let mut err = ((resk - resg) * h).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    Panel {
        a,
        b,
        value: resk * h,
        error: err,
        inner: inner * hab,
        resabs,
        evals,
    }
}

fn eval_panels<F>(f: &F, spans: &[(f64, f64)], parallel: bool) -> Vec<Panel>
where
    F: Fn(f64) -> Sample + Sync,
{
    if parallel {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            let xs: Vec<f64> = spans.iter().flat_map(|&(a, b)| abscissae(a, b)).collect();
            let samples: Vec<Sample> = xs.par_iter().map(|&x| f(x)).collect();
            return spans
                .iter()
                .zip(samples.chunks_exact(NODES))
                .map(|(&(a, b), s)| combine(a, b, s))
                .collect();
        }
    }
    spans
        .iter()
        .map(|&(a, b)| {
            let x = abscissae(a, b);
            let mut s = [Sample::default(); NODES];
            for (si, &xi) in s.iter_mut().zip(x.iter()) {
                *si = f(xi);
            }
            combine(a, b, &s)
        })
        .collect()
}

/// Integrates `f` over `[edges[0], edges[last]]`, starting from the panels
/// delimited by the sorted `edges`.
pub(crate) fn adaptive<F>(f: &F, edges: &[f64], tol: Tol, limits: Limits, parallel: bool) -> Outcome
where
    F: Fn(f64) -> Sample + Sync,
{
    let spans: Vec<(f64, f64)> = edges
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| (w[0], w[1]))
        .collect();
    if spans.is_empty() {
        return Outcome {
            converged: true,
            ..Outcome::default()
        };
    }
    let mut panels = eval_panels(f, &spans, parallel);
    let mut evals: u64 = panels.iter().map(|p| p.evals).sum();
    loop {
        let mut value = 0.0;
        let mut error = 0.0;
        let mut inner = 0.0;
        let mut resabs = 0.0;
        let mut worst = 0;
        for (i, p) in panels.iter().enumerate() {
            value += p.value;
            error += p.error;
            inner += p.inner;
            resabs += p.resabs;
            if p.error > panels[worst].error {
                worst = i;
            }
        }
        let done = error <= tol.target(value, resabs);
        let p = panels[worst];
        let mid = 0.5 * (p.a + p.b);
        let splittable = mid > p.a && mid < p.b;
        if done || !splittable || panels.len() >= limits.max_panels || evals >= limits.max_evals {
            return Outcome {
                value,
                rule_error: error,
                inner_error: inner,
                resabs,
                evals,
                converged: done,
            };
        }
        let halves = eval_panels(f, &[(p.a, mid), (mid, p.b)], parallel);
        evals += halves[0].evals + halves[1].evals;
        panels[worst] = halves[0];
        panels.insert(worst + 1, halves[1]);
    }
}
