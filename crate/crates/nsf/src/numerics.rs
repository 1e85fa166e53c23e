//! Small numerical building blocks: adaptive Simpson quadrature, a Thomas
//! solve for tridiagonal systems, and monotone root bracketing.

/// Adaptive Simpson quadrature of `f` on `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = simpson(fa, fm, fb, a, b);
    // Depth 24 bounds the worst case at ~10⁷ evaluations; integrands whose
    // own rounding noise exceeds the requested tolerance then terminate
    // with the best refinement instead of expanding the full tree.
    simpson_rec(f, a, b, fa, fm, fb, whole, tol, 24)
}

/// Quadrature of `f` on `[a, b]` split at the interior points of `breaks`.
/// Use when the integrand has kinks or jumps at known locations.
pub fn simpson_with_breaks<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    breaks: &[f64],
    tol: f64,
) -> f64 {
    let mut cuts: Vec<f64> = breaks.iter().copied().filter(|&z| z > a && z < b).collect();
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup();
    let mut total = 0.0;
    let mut lo = a;
    let n = cuts.len() + 1;
    let piece_tol = tol / n as f64;
    for &c in &cuts {
        total += adaptive_simpson(f, lo, c, piece_tol);
        lo = c;
    }
    total + adaptive_simpson(f, lo, b, piece_tol)
}

fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(fa, flm, fm, a, m);
    let right = simpson(fm, frm, fb, m, b);
    let delta = left + right - whole;
    // Second escape: once delta sits at the rounding floor of the partial
    // sums, further splitting only spends evaluations on noise.
    if depth == 0 || delta.abs() <= 15.0 * tol || delta.abs() <= 1e-15 * (left.abs() + right.abs())
    {
        return left + right + delta / 15.0;
    }
    simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on [-1, 1],
/// found by Newton iteration on the Legendre recurrence. Nodes come in
/// exact sign pairs, so odd integrands cancel to the last bit.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 2);
    let mut rule = Vec::with_capacity(n);
    for i in 0..n / 2 {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..50 {
            let (p, d) = legendre_pair(n, x);
            dp = d;
            let step = p / d;
            x -= step;
            if step.abs() <= 1e-15 * x.abs().max(0.1) {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.push((x, w));
        rule.push((-x, w));
    }
    if n % 2 == 1 {
        let (_, d) = legendre_pair(n, 0.0);
        rule.push((0.0, 2.0 / (d * d)));
    }
    rule.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    rule
}

/// Legendre polynomial P_n and its derivative at `x`, |x| < 1.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Fixed-order Gauss-Legendre quadrature of `f` on `[a, b]`, split at the
/// interior points of `breaks`: one application of `rule` per smooth
/// segment, so the cost is deterministic and the accuracy scales with the
/// integrand instead of an absolute tolerance.
pub fn gauss_with_breaks<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    breaks: &[f64],
    rule: &[(f64, f64)],
) -> f64 {
    let mut cuts: Vec<f64> = breaks.iter().copied().filter(|&z| z > a && z < b).collect();
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup();
    let mut total = 0.0;
    let mut lo = a;
    for &hi in cuts.iter().chain(std::iter::once(&b)) {
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let mut seg = 0.0;
        for &(x, w) in rule {
            seg += w * f(mid + half * x);
        }
        total += half * seg;
        lo = hi;
    }
    total
}

/// Solves a tridiagonal system by the Thomas algorithm.
///
/// `lower` and `upper` have length `n - 1`; `diag` and `rhs` have length `n`.
/// The caller is responsible for the matrix being nonsingular; the systems
/// assembled in this crate are strictly diagonally dominant.
pub fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    assert!(n >= 1);
    assert_eq!(lower.len(), n - 1);
    assert_eq!(upper.len(), n - 1);
    assert_eq!(rhs.len(), n);

    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = upper.first().copied().unwrap_or(0.0) / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let denom = diag[i] - lower[i - 1] * c[i - 1];
        if i < n - 1 {
            c[i] = upper[i] / denom;
        }
        d[i] = (rhs[i] - lower[i - 1] * d[i - 1]) / denom;
    }
    let mut x = d;
    for i in (0..n - 1).rev() {
        let next = x[i + 1];
        x[i] -= c[i] * next;
    }
    x
}

/// Inverts a strictly increasing function with `f(0) = 0` at `y > 0`:
/// bisection to absolute width `tol`, then one Newton polish using `df`.
pub fn invert_increasing<F, G>(f: F, df: G, y: f64, tol: f64) -> f64
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    assert!(y > 0.0 && y.is_finite());
    let mut hi = 1.0;
    let mut guard = 0;
    while f(hi) < y {
        hi *= 2.0;
        guard += 1;
        assert!(guard < 2100, "bracket expansion failed");
    }
    let mut lo = 0.0;
    while hi - lo > tol * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if f(mid) < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    let slope = df(x);
    if slope > 0.0 && slope.is_finite() {
        let polished = x - (f(x) - y) / slope;
        if polished.is_finite() && polished > 0.0 {
            x = polished;
        }
    }
    x
}

/// Least-squares slope through the origin for samples `(x_i, y_i)`.
pub fn slope_through_origin(samples: &[(f64, f64)]) -> f64 {
    let sxy: f64 = samples.iter().map(|(x, y)| x * y).sum();
    let sxx: f64 = samples.iter().map(|(x, _)| x * x).sum();
    sxy / sxx
}

/// Log-spaced grid with `n` points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let (la, lb) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (la + (lb - la) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Uniform grid with `n` points from `lo` to `hi` inclusive.
pub fn lin_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}
