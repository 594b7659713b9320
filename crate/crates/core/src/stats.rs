//! Kolmogorov–Smirnov statistics.

/// Critical constant used for the KS acceptance band `c/√N`.
pub const KS_BAND: f64 = 1.95;

/// One-sample statistic `sup |F_N(x) − F(x)|`. Sorts `xs` in place.
pub fn ks_one_sample<F: Fn(f64) -> f64>(xs: &mut [f64], cdf: F) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter().enumerate().fold(0.0, |d, (i, &x)| {
        let f = cdf(x);
        d.max(f - i as f64 / n).max((i + 1) as f64 / n - f)
    })
}

/// Two-sample statistic `sup |F_a(x) − F_b(x)|`, tie-aware. Sorts both slices in place.
pub fn ks_two_sample<T: PartialOrd + Copy>(a: &mut [T], b: &mut [T]) -> f64 {
    let cmp = |x: &T, y: &T| x.partial_cmp(y).expect("comparable samples");
    a.sort_by(cmp);
    b.sort_by(cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = if a[i] <= b[j] { a[i] } else { b[j] };
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// `KS_BAND / √n`.
pub fn ks_band_one(n: usize) -> f64 {
    KS_BAND / (n as f64).sqrt()
}

/// `KS_BAND · √((n + m)/(n m))`.
pub fn ks_band_two(n: usize, m: usize) -> f64 {
    let (n, m) = (n as f64, m as f64);
    KS_BAND * ((n + m) / (n * m)).sqrt()
}
