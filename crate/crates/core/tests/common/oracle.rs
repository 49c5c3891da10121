//! Exhaustive reference implementations used to check the detectors. They
//! work on plain nested vectors and share no code with the library.

#![allow(dead_code)]

pub type Points = Vec<Vec<f64>>;

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..a.len() {
        let d = a[i] - b[i];
        acc += d * d;
    }
    acc.sqrt()
}

/// All train points sorted by distance to `q` (then index), minus `skip`.
pub fn sorted_neighbors(train: &Points, q: &[f64], skip: Option<usize>) -> Vec<(f64, usize)> {
    let mut all: Vec<(f64, usize)> = Vec::new();
    for (i, p) in train.iter().enumerate() {
        if Some(i) != skip {
            all.push((dist(q, p), i));
        }
    }
    all.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
    all
}

pub fn knn_dists(train: &Points, q: &[f64], k: usize, skip: Option<usize>) -> Vec<f64> {
    sorted_neighbors(train, q, skip)
        .into_iter()
        .take(k)
        .map(|(d, _)| d)
        .collect()
}

pub fn knn_largest(train: &Points, query: Option<&Points>, k: usize) -> Vec<f64> {
    knn_each(train, query, k, |d| d[k - 1])
}

pub fn knn_mean(train: &Points, query: Option<&Points>, k: usize) -> Vec<f64> {
    knn_each(train, query, k, |d| {
        let mut s = 0.0;
        for v in d {
            s += v;
        }
        s / d.len() as f64
    })
}

pub fn knn_median(train: &Points, query: Option<&Points>, k: usize) -> Vec<f64> {
    knn_each(train, query, k, |d| {
        if k % 2 == 1 {
            d[k / 2]
        } else {
            (d[k / 2 - 1] + d[k / 2]) / 2.0
        }
    })
}

fn knn_each(
    train: &Points,
    query: Option<&Points>,
    k: usize,
    f: impl Fn(&[f64]) -> f64,
) -> Vec<f64> {
    match query {
        None => (0..train.len())
            .map(|i| f(&knn_dists(train, &train[i], k, Some(i))))
            .collect(),
        Some(q) => q.iter().map(|p| f(&knn_dists(train, p, k, None))).collect(),
    }
}

/// Direct evaluation of the reachability / density / factor definitions.
pub fn lof(train: &Points, query: Option<&Points>, k: usize) -> Vec<f64> {
    let n = train.len();
    let hood: Vec<Vec<(f64, usize)>> = (0..n)
        .map(|i| {
            sorted_neighbors(train, &train[i], Some(i))
                .into_iter()
                .take(k)
                .collect()
        })
        .collect();
    let kdist: Vec<f64> = hood.iter().map(|h| h[k - 1].0).collect();
    let density = |h: &[(f64, usize)]| {
        let mut total = 0.0;
        for &(d, j) in h {
            total += if kdist[j] > d { kdist[j] } else { d };
        }
        let mean = total / k as f64;
        if mean == 0.0 {
            1e12
        } else {
            (1.0 / mean).min(1e12)
        }
    };
    let lrd: Vec<f64> = hood.iter().map(|h| density(h)).collect();
    let factor = |h: &[(f64, usize)], own: f64| {
        let mut total = 0.0;
        for &(_, j) in h {
            total += lrd[j] / own;
        }
        total / k as f64
    };
    match query {
        None => (0..n).map(|i| factor(&hood[i], lrd[i])).collect(),
        Some(q) => q
            .iter()
            .map(|p| {
                let h: Vec<(f64, usize)> = sorted_neighbors(train, p, None)
                    .into_iter()
                    .take(k)
                    .collect();
                factor(&h, density(&h))
            })
            .collect(),
    }
}

/// Variance of the weighted cosines over every pair of the k neighbors,
/// negated.
pub fn abod(train: &Points, query: Option<&Points>, k: usize) -> Vec<f64> {
    let score = |x: &[f64], skip: Option<usize>| {
        let hood: Vec<usize> = sorted_neighbors(train, x, skip)
            .into_iter()
            .take(k)
            .map(|(_, j)| j)
            .collect();
        let mut w = Vec::new();
        for a in 0..hood.len() {
            for b in a + 1..hood.len() {
                let u: Vec<f64> = (0..x.len()).map(|t| train[hood[a]][t] - x[t]).collect();
                let v: Vec<f64> = (0..x.len()).map(|t| train[hood[b]][t] - x[t]).collect();
                let uu: f64 = u.iter().map(|c| c * c).sum();
                let vv: f64 = v.iter().map(|c| c * c).sum();
                if uu.sqrt() < 1e-12 || vv.sqrt() < 1e-12 {
                    continue;
                }
                let uv: f64 = u.iter().zip(&v).map(|(p, q)| p * q).sum();
                w.push(uv / (uu * vv));
            }
        }
        if w.is_empty() {
            return 0.0;
        }
        let mean = w.iter().sum::<f64>() / w.len() as f64;
        -(w.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / w.len() as f64)
    };
    match query {
        None => (0..train.len())
            .map(|i| score(&train[i], Some(i)))
            .collect(),
        Some(q) => q.iter().map(|p| score(p, None)).collect(),
    }
}
