//! Distance- and cluster-based reference detectors.
//!
//! * k-nn: mean distance to the k nearest neighbors.
//! * kth-nn: distance to the k-th nearest neighbor.
//! * LOF (density-ratio form): mean over neighbors `j` of `d̃_i / d̃_j`, where
//!   `d̃` is the k-nn mean distance. This is the simplified ratio, not the
//!   original reachability-distance LOF, so values differ from library LOF
//!   implementations away from uniform density.
//! * LDCOF: distance to the own k-means centroid divided by the mean such
//!   distance within that cluster. No large/small cluster split is made.
//!
//! Distances are Euclidean on whatever features the dataset holds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::matrix::{euclidean_distance, squared_distance, Matrix};
use crate::scoring::ScoreVector;

/// Floor applied to k-nn mean distances in the LOF ratio, so that duplicate
/// points give finite scores.
pub const LOF_EPSILON: f64 = 1e-12;
/// LDCOF score of a sample that forms a cluster on its own.
pub const LDCOF_SINGLETON_SCORE: f64 = 1e12;
pub const KMEANS_MAX_ITER: usize = 300;

/// Exact k nearest neighbors of every sample, self excluded.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborTable {
    k: usize,
    indices: Vec<usize>,
    distances: Vec<f64>,
}

impl NeighborTable {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.indices.len() / self.k
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Neighbor indices of sample `i`, nearest first.
    pub fn indices(&self, i: usize) -> &[usize] {
        &self.indices[i * self.k..(i + 1) * self.k]
    }

    /// Distances matching [`indices`](Self::indices), ascending.
    pub fn distances(&self, i: usize) -> &[f64] {
        &self.distances[i * self.k..(i + 1) * self.k]
    }

    /// Mean distance to the k neighbors of each sample.
    pub fn mean_distances(&self) -> Vec<f64> {
        self.distances
            .chunks_exact(self.k)
            .map(|d| d.iter().sum::<f64>() / self.k as f64)
            .collect()
    }
}

fn check_k(k: usize, n: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be >= 1".into()));
    }
    if k >= n {
        return Err(Error::KTooLarge { k, n });
    }
    Ok(())
}

/// Brute-force neighbor search. Equal distances are ordered by sample index.
pub fn knn_table(data: &Dataset, k: usize) -> Result<NeighborTable> {
    let n = data.n_samples();
    check_k(k, n)?;
    let x = data.features();
    let rows: Vec<Vec<(f64, usize)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut cand: Vec<(f64, usize)> = (0..n)
                .filter(|&j| j != i)
                .map(|j| (euclidean_distance(x.row(i), x.row(j)), j))
                .collect();
            let by_dist =
                |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
            if k < cand.len() {
                cand.select_nth_unstable_by(k - 1, by_dist);
                cand.truncate(k);
            }
            cand.sort_by(by_dist);
            cand
        })
        .collect();
    let mut indices = Vec::with_capacity(n * k);
    let mut distances = Vec::with_capacity(n * k);
    for row in rows {
        for (d, j) in row {
            indices.push(j);
            distances.push(d);
        }
    }
    Ok(NeighborTable {
        k,
        indices,
        distances,
    })
}

pub fn knn_score(data: &Dataset, k: usize) -> Result<ScoreVector> {
    let table = knn_table(data, k)?;
    Ok(ScoreVector::new(
        table.mean_distances(),
        "knn",
        format!("k={k}"),
    ))
}

pub fn kthnn_score(data: &Dataset, k: usize) -> Result<ScoreVector> {
    let table = knn_table(data, k)?;
    let scores = (0..table.len())
        .map(|i| table.distances(i)[k - 1])
        .collect();
    Ok(ScoreVector::new(scores, "kthnn", format!("k={k}")))
}

pub fn lof_score(data: &Dataset, k: usize) -> Result<ScoreVector> {
    let table = knn_table(data, k)?;
    Ok(ScoreVector::new(
        lof_from_table(&table),
        "lof",
        format!("k={k}"),
    ))
}

pub fn lof_from_table(table: &NeighborTable) -> Vec<f64> {
    let mean: Vec<f64> = table
        .mean_distances()
        .into_iter()
        .map(|d| d.max(LOF_EPSILON))
        .collect();
    (0..table.len())
        .map(|i| {
            let nb = table.indices(i);
            nb.iter().map(|&j| mean[i] / mean[j]).sum::<f64>() / nb.len() as f64
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    pub centroids: Matrix,
    pub assignment: Vec<usize>,
    pub inertia: f64,
    pub iterations: usize,
}

impl Clustering {
    pub fn k(&self) -> usize {
        self.centroids.rows()
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k()];
        for &c in &self.assignment {
            sizes[c] += 1;
        }
        sizes
    }
}

/// Lloyd's k-means with k-means++ seeding, deterministic for a given seed.
///
/// Stops once assignments no longer change, or after
/// [`KMEANS_MAX_ITER`] rounds. A cluster that empties is re-seeded with the
/// sample lying farthest from its current centroid. A sample equidistant to
/// several centroids stays where it is.
pub fn kmeans(data: &Dataset, k: usize, seed: u64) -> Result<Clustering> {
    let n = data.n_samples();
    if k == 0 {
        return Err(Error::InvalidParameter(
            "number of clusters must be >= 1".into(),
        ));
    }
    if k > n {
        return Err(Error::KTooLarge { k, n });
    }
    let x = data.features();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids = plus_plus_seeds(x, k, &mut rng);
    let mut assignment = vec![usize::MAX; n];
    let mut iterations = 0;

    loop {
        iterations += 1;
        let next: Vec<usize> = (0..n)
            .into_par_iter()
            .map(|i| nearest_centroid(x.row(i), &centroids, assignment[i]).0)
            .collect();
        let changed = next != assignment;
        assignment = next;
        if !changed || iterations == KMEANS_MAX_ITER {
            break;
        }
        update_centroids(x, &mut centroids, &mut assignment);
    }

    let inertia = (0..n)
        .map(|i| squared_distance(x.row(i), centroids.row(assignment[i])))
        .sum();
    Ok(Clustering {
        centroids,
        assignment,
        inertia,
        iterations,
    })
}

fn plus_plus_seeds(x: &Matrix, k: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let n = x.rows();
    let mut chosen = Vec::with_capacity(k);
    chosen.push(rng.gen_range(0..n));
    let mut d2: Vec<f64> = (0..n)
        .map(|i| squared_distance(x.row(i), x.row(chosen[0])))
        .collect();
    while chosen.len() < k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let mut target = rng.gen::<f64>() * total;
            let mut pick = None;
            for (i, &w) in d2.iter().enumerate() {
                if w > 0.0 {
                    pick = Some(i);
                    if target < w {
                        break;
                    }
                    target -= w;
                }
            }
            pick.expect("positive total weight")
        } else {
            // only duplicates of existing seeds remain
            (0..n).find(|i| !chosen.contains(i)).expect("k <= n")
        };
        chosen.push(pick);
        for (i, d) in d2.iter_mut().enumerate() {
            *d = d.min(squared_distance(x.row(i), x.row(pick)));
        }
    }
    x.select_rows(&chosen)
}

fn nearest_centroid(p: &[f64], centroids: &Matrix, current: usize) -> (usize, f64) {
    let mut best = (usize::MAX, f64::INFINITY);
    for (c, row) in centroids.row_iter().enumerate() {
        let d = squared_distance(p, row);
        if d < best.1 {
            best = (c, d);
        }
    }
    if current < centroids.rows() && squared_distance(p, centroids.row(current)) == best.1 {
        best.0 = current;
    }
    best
}

fn update_centroids(x: &Matrix, centroids: &mut Matrix, assignment: &mut [usize]) {
    let k = centroids.rows();
    let d = x.cols();
    let mut sums = Matrix::zeros(k, d);
    let mut counts = vec![0usize; k];
    for (i, &c) in assignment.iter().enumerate() {
        counts[c] += 1;
        for (s, v) in sums.row_mut(c).iter_mut().zip(x.row(i)) {
            *s += v;
        }
    }
    for (c, &count) in counts.iter().enumerate() {
        if count > 0 {
            for (dst, s) in centroids.row_mut(c).iter_mut().zip(sums.row(c)) {
                *dst = s / count as f64;
            }
        }
    }
    for c in 0..k {
        if counts[c] > 0 {
            continue;
        }
        let far = (0..x.rows())
            .filter(|&i| counts[assignment[i]] > 1)
            .max_by(|&a, &b| {
                let da = squared_distance(x.row(a), centroids.row(assignment[a]));
                let db = squared_distance(x.row(b), centroids.row(assignment[b]));
                da.total_cmp(&db).then(b.cmp(&a))
            });
        if let Some(i) = far {
            counts[assignment[i]] -= 1;
            counts[c] = 1;
            assignment[i] = c;
            centroids.row_mut(c).copy_from_slice(x.row(i));
        }
    }
}

/// LDCOF scores from an existing clustering.
pub fn ldcof_from_clustering(data: &Dataset, clustering: &Clustering) -> Vec<f64> {
    let x = data.features();
    let dist: Vec<f64> = (0..x.rows())
        .map(|i| euclidean_distance(x.row(i), clustering.centroids.row(clustering.assignment[i])))
        .collect();
    let k = clustering.k();
    let mut sum = vec![0.0; k];
    let mut count = vec![0usize; k];
    for (i, &c) in clustering.assignment.iter().enumerate() {
        sum[c] += dist[i];
        count[c] += 1;
    }
    dist.iter()
        .zip(&clustering.assignment)
        .map(|(&d, &c)| {
            let mean = sum[c] / count[c] as f64;
            if mean > 0.0 {
                d / mean
            } else if count[c] == 1 {
                LDCOF_SINGLETON_SCORE
            } else {
                // every member sits on the centroid
                1.0
            }
        })
        .collect()
}

pub fn ldcof_score(data: &Dataset, k_clusters: usize, seed: u64) -> Result<ScoreVector> {
    let clustering = kmeans(data, k_clusters, seed)?;
    Ok(ScoreVector::new(
        ldcof_from_clustering(data, &clustering),
        "ldcof",
        format!("k_clusters={k_clusters};seed={seed}"),
    ))
}
