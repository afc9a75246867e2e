use serde::Serialize;

use super::AnalyticsError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Clustering {
    pub k: usize,
    pub centroids: Vec<Vec<f64>>,
    /// Cluster index per input vector.
    pub assignment: Vec<usize>,
    /// Within-cluster sum of squared distances for the final assignment.
    pub sse: f64,
    /// SSE after seeding, then after each iteration.
    pub sse_history: Vec<f64>,
    pub iterations: usize,
}

impl Clustering {
    pub fn members(&self, cluster: usize) -> Vec<usize> {
        (0..self.assignment.len()).filter(|&i| self.assignment[i] == cluster).collect()
    }
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest(v: &[f64], centroids: &[Vec<f64>]) -> usize {
    let mut best = 0;
    for (j, c) in centroids.iter().enumerate().skip(1) {
        if dist2(v, c) < dist2(v, &centroids[best]) {
            best = j;
        }
    }
    best
}

fn assign(vectors: &[Vec<f64>], centroids: &[Vec<f64>]) -> Vec<usize> {
    vectors.iter().map(|v| nearest(v, centroids)).collect()
}

fn sse(vectors: &[Vec<f64>], centroids: &[Vec<f64>], assignment: &[usize]) -> f64 {
    vectors.iter().zip(assignment).map(|(v, &j)| dist2(v, &centroids[j])).sum()
}

// First centroid is vector 0; each next one is the vector farthest from the
// chosen set, ties to the lowest index.
fn seed(vectors: &[Vec<f64>], k: usize) -> Vec<Vec<f64>> {
    let mut centroids = vec![vectors[0].clone()];
    let mut gap: Vec<f64> = vectors.iter().map(|v| dist2(v, &vectors[0])).collect();
    while centroids.len() < k {
        let mut far = 0;
        for i in 1..vectors.len() {
            if gap[i] > gap[far] {
                far = i;
            }
        }
        centroids.push(vectors[far].clone());
        for (g, v) in gap.iter_mut().zip(vectors) {
            *g = g.min(dist2(v, &vectors[far]));
        }
    }
    centroids
}

fn update(vectors: &[Vec<f64>], assignment: &mut [usize], k: usize, dim: usize, old: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut counts = vec![0usize; k];
    for &j in assignment.iter() {
        counts[j] += 1;
    }
    // An empty cluster takes the point farthest from its centroid, drawn
    // from a cluster that can spare one.
    for empty in 0..k {
        if counts[empty] > 0 {
            continue;
        }
        let donor = (0..vectors.len())
            .filter(|&i| counts[assignment[i]] > 1)
            .fold(None::<usize>, |best, i| match best {
                Some(b) if dist2(&vectors[b], &old[assignment[b]]) >= dist2(&vectors[i], &old[assignment[i]]) => best,
                _ => Some(i),
            })
            .expect("k <= n leaves a cluster with two members");
        counts[assignment[donor]] -= 1;
        assignment[donor] = empty;
        counts[empty] = 1;
    }
    let mut sums = vec![vec![0.0; dim]; k];
    for (v, &j) in vectors.iter().zip(assignment.iter()) {
        for (s, x) in sums[j].iter_mut().zip(v) {
            *s += x;
        }
    }
    for (s, &c) in sums.iter_mut().zip(&counts) {
        s.iter_mut().for_each(|x| *x /= c as f64);
    }
    sums
}

/// Lloyd's batch k-means with deterministic farthest-point seeding. Stops
/// when an iteration leaves the assignment unchanged or after `max_iter`.
pub fn kmeans(vectors: &[Vec<f64>], k: usize, max_iter: usize) -> Result<Clustering, AnalyticsError> {
    if vectors.is_empty() {
        return Err(AnalyticsError::Empty);
    }
    if k == 0 || k > vectors.len() {
        return Err(AnalyticsError::KOutOfRange { k, n: vectors.len() });
    }
    if max_iter == 0 {
        return Err(AnalyticsError::ZeroIterations);
    }
    let dim = vectors[0].len();
    for (index, v) in vectors.iter().enumerate() {
        if v.len() != dim {
            return Err(AnalyticsError::DimensionMismatch { index, expected: dim, found: v.len() });
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(AnalyticsError::NonFinite(index));
        }
    }

    let mut centroids = seed(vectors, k);
    let mut assignment = assign(vectors, &centroids);
    let mut sse_history = vec![sse(vectors, &centroids, &assignment)];
    let mut iterations = 0;
    while iterations < max_iter {
        iterations += 1;
        let mut repaired = assignment.clone();
        centroids = update(vectors, &mut repaired, k, dim, &centroids);
        let next = assign(vectors, &centroids);
        sse_history.push(sse(vectors, &centroids, &next));
        let done = next == assignment;
        assignment = next;
        if done {
            break;
        }
    }
    Ok(Clustering { k, sse: *sse_history.last().unwrap(), centroids, assignment, sse_history, iterations })
}
