use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Features, Graph, Subgraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForwardConfig {
    pub layers: usize,
    /// Output width of every layer.
    pub hidden_dim: usize,
    pub weight_seed: u64,
}

impl Default for ForwardConfig {
    fn default() -> Self {
        Self {
            layers: 2,
            hidden_dim: 16,
            weight_seed: 0,
        }
    }
}

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension {
                what: "matrix entries",
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Self { rows: n, cols: n, data }
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
}

/// Layer weights, drawn once and shared by every subgraph.
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardWeights {
    layers: Vec<Matrix>,
}

impl ForwardWeights {
    /// Glorot-uniform weights: entries uniform in `[-a, a]`,
    /// `a = sqrt(6 / (f_in + f_out))`.
    pub fn glorot(input_dim: usize, config: &ForwardConfig) -> Result<Self> {
        if config.layers == 0 || config.hidden_dim == 0 || input_dim == 0 {
            return Err(Error::InvalidParameter(
                "layers, hidden width and input width must be positive".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(config.weight_seed);
        let mut layers = Vec::with_capacity(config.layers);
        let mut fin = input_dim;
        for _ in 0..config.layers {
            let fout = config.hidden_dim;
            let a = (6.0 / (fin + fout) as f64).sqrt();
            let data = (0..fin * fout).map(|_| rng.random_range(-a..=a)).collect();
            layers.push(Matrix {
                rows: fin,
                cols: fout,
                data,
            });
            fin = fout;
        }
        Ok(Self { layers })
    }

    /// Caller-supplied weights; consecutive shapes must chain.
    pub fn explicit(layers: Vec<Matrix>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::InvalidParameter("at least one layer is required".into()));
        }
        for w in layers.windows(2) {
            if w[0].cols != w[1].rows {
                return Err(Error::Dimension {
                    what: "weight chain",
                    expected: w[0].cols,
                    found: w[1].rows,
                });
            }
        }
        Ok(Self { layers })
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].rows
    }

    pub fn layers(&self) -> &[Matrix] {
        &self.layers
    }
}

/// Rows of the parent graph's features for the subgraph's nodes, or a single
/// column of ones when the graph has no features.
pub fn restrict_features(graph: &Graph, sub: &Subgraph) -> Matrix {
    match graph.features() {
        Some(f) => gather(f, sub),
        None => Matrix {
            rows: sub.node_count(),
            cols: 1,
            data: vec![1.0; sub.node_count()],
        },
    }
}

fn gather(f: &Features, sub: &Subgraph) -> Matrix {
    let mut data = Vec::with_capacity(sub.node_count() * f.cols());
    for &g in sub.global_ids() {
        data.extend(f.row(g as usize).iter().map(|&x| f64::from(x)));
    }
    Matrix {
        rows: sub.node_count(),
        cols: f.cols(),
        data,
    }
}

/// `H ← ReLU(Â H W)` per layer with `Â = D̃^{-1/2}(A + I)D̃^{-1/2}` on the
/// subgraph's own degrees. Returns `‖H^{(L)}(v)‖` per local node.
pub fn forward_pass(sub: &Subgraph, inputs: &Matrix, weights: &ForwardWeights) -> Result<Vec<f64>> {
    if inputs.rows != sub.node_count() {
        return Err(Error::Dimension {
            what: "input rows",
            expected: sub.node_count(),
            found: inputs.rows,
        });
    }
    if inputs.cols != weights.input_dim() {
        return Err(Error::Dimension {
            what: "input columns",
            expected: weights.input_dim(),
            found: inputs.cols,
        });
    }
    let n = sub.node_count();
    let scale: Vec<f64> = (0..n)
        .map(|i| 1.0 / ((sub.local_degree(i) + 1) as f64).sqrt())
        .collect();
    let mut h = inputs.clone();
    for w in &weights.layers {
        // aggregate first: Â H has the narrower width when f_in <= f_out
        let mut agg = vec![0.0; n * h.cols];
        for i in 0..n {
            let out = &mut agg[i * h.cols..(i + 1) * h.cols];
            let self_w = scale[i] * scale[i];
            for (o, x) in out.iter_mut().zip(h.row(i)) {
                *o += self_w * x;
            }
            for &j in sub.local_neighbors(i) {
                let c = scale[i] * scale[j as usize];
                for (o, x) in out.iter_mut().zip(h.row(j as usize)) {
                    *o += c * x;
                }
            }
        }
        let mut next = vec![0.0; n * w.cols];
        for i in 0..n {
            let out = &mut next[i * w.cols..(i + 1) * w.cols];
            for (k, &a) in agg[i * h.cols..(i + 1) * h.cols].iter().enumerate() {
                if a != 0.0 {
                    for (o, &x) in out.iter_mut().zip(w.row(k)) {
                        *o += a * x;
                    }
                }
            }
            for o in out.iter_mut() {
                *o = o.max(0.0);
            }
        }
        h = Matrix {
            rows: n,
            cols: w.cols,
            data: next,
        };
    }
    Ok((0..n)
        .map(|i| h.row(i).iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect())
}
