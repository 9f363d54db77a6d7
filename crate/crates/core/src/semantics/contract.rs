//! Pairwise tensor-network contraction.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;

use super::{Matrix, SemanticsError};
use crate::diagram::{Diagram, NodeKind, Port};

/// Strategy for choosing the next pair of tensors to contract.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ContractionOrder {
    /// Contract the connected pair with the smallest result rank, ties broken
    /// by the smallest tensor ids.
    #[default]
    Greedy,
    /// Grow a single accumulator tensor, absorbing neighbours in id order.
    Sequential,
}

/// Dense tensor over binary indices; `idx[0]` is the most significant axis.
#[derive(Clone, Debug)]
struct Tensor {
    idx: Vec<usize>,
    data: Vec<C64>,
}

impl Tensor {
    fn rank(&self) -> usize {
        self.idx.len()
    }

    /// Sums over the diagonal of two axes that carry the same index.
    fn trace(&self, a: usize, b: usize) -> Tensor {
        let r = self.rank();
        let keep: Vec<usize> = (0..r).filter(|&k| k != a && k != b).collect();
        let mut data = vec![C64::new(0.0, 0.0); 1 << keep.len()];
        for (o, slot) in data.iter_mut().enumerate() {
            let mut base = 0usize;
            for (pos, &k) in keep.iter().enumerate() {
                if (o >> (keep.len() - 1 - pos)) & 1 == 1 {
                    base |= 1 << (r - 1 - k);
                }
            }
            let both = (1 << (r - 1 - a)) | (1 << (r - 1 - b));
            *slot = self.data[base] + self.data[base | both];
        }
        Tensor {
            idx: keep.iter().map(|&k| self.idx[k]).collect(),
            data,
        }
    }
}

fn node_tensor(kind: NodeKind, degree: usize) -> Vec<C64> {
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    match kind {
        NodeKind::Z(a) => {
            let mut v = vec![zero; 1 << degree];
            v[0] = one;
            let last = v.len() - 1;
            v[last] += a;
            v
        }
        NodeKind::H => vec![one, one, one, -one],
        // axis 0 is the input port: t[in][out] = M[out][in]
        NodeKind::Triangle => vec![one, zero, one, one],
        NodeKind::TriangleInv => vec![one, zero, -one, one],
    }
}

fn result_indices(a: &Tensor, b: &Tensor) -> (Vec<usize>, Vec<usize>) {
    let shared: Vec<usize> = a
        .idx
        .iter()
        .copied()
        .filter(|i| b.idx.contains(i))
        .collect();
    let free: Vec<usize> = a
        .idx
        .iter()
        .chain(b.idx.iter())
        .copied()
        .filter(|i| !shared.contains(i))
        .collect();
    (free, shared)
}

fn bit_weights(idx: &[usize], of: &[usize]) -> Vec<usize> {
    // weight of each index of `of` inside a tensor with axes `idx` (0 if absent)
    of.iter()
        .map(|i| match idx.iter().position(|j| j == i) {
            Some(k) => 1 << (idx.len() - 1 - k),
            None => 0,
        })
        .collect()
}

fn offsets(weights: &[usize]) -> Vec<usize> {
    let n = weights.len();
    (0..1usize << n)
        .map(|s| {
            (0..n)
                .filter(|pos| (s >> (n - 1 - pos)) & 1 == 1)
                .map(|pos| weights[pos])
                .sum()
        })
        .collect()
}

fn contract_pair(a: &Tensor, b: &Tensor) -> Tensor {
    let (free, shared) = result_indices(a, b);
    let sa = offsets(&bit_weights(&a.idx, &shared));
    let sb = offsets(&bit_weights(&b.idx, &shared));
    let fa = offsets(&bit_weights(&a.idx, &free));
    let fb = offsets(&bit_weights(&b.idx, &free));
    let mut data = Vec::with_capacity(fa.len());
    for o in 0..fa.len() {
        let (ao, bo) = (fa[o], fb[o]);
        let mut sum = C64::new(0.0, 0.0);
        for s in 0..sa.len() {
            sum += a.data[ao + sa[s]] * b.data[bo + sb[s]];
        }
        data.push(sum);
    }
    Tensor { idx: free, data }
}

/// Interprets `d` as a `2^m x 2^n` matrix.
///
/// Every wire becomes a binary index; boundary wires stay open. Tensors are
/// contracted pairwise in the given order. Fails if any intermediate tensor
/// (or the final boundary) exceeds `cap` indices.
pub fn interpret_with(
    d: &Diagram,
    order: ContractionOrder,
    cap: usize,
) -> Result<Matrix, SemanticsError> {
    let n = d.n_inputs();
    let m = d.n_outputs();
    if n + m > cap {
        return Err(SemanticsError::TooLarge { rank: n + m, cap });
    }
    let mut wire_of: BTreeMap<Port, usize> = BTreeMap::new();
    for (k, (a, b)) in d.edges().enumerate() {
        wire_of.insert(a, k);
        wire_of.insert(b, k);
    }

    let mut tensors: Vec<Option<Tensor>> = Vec::new();
    for (id, node) in d.nodes() {
        let deg = node.degree();
        let idx: Vec<usize> = (0..deg).map(|k| wire_of[&Port::Node(id, k)]).collect();
        let mut t = Tensor {
            idx,
            data: node_tensor(node.kind, deg),
        };
        // self-loops: the same wire on two axes of one node
        while let Some((a, b)) = repeated_axes(&t.idx) {
            t = t.trace(a, b);
        }
        if t.rank() > cap {
            return Err(SemanticsError::TooLarge {
                rank: t.rank(),
                cap,
            });
        }
        tensors.push(Some(t));
    }

    let acc = match order {
        ContractionOrder::Greedy => contract_greedy(tensors, cap)?,
        ContractionOrder::Sequential => contract_sequential(tensors, cap)?,
    };
    let acc = acc.unwrap_or(Tensor {
        idx: vec![],
        data: vec![C64::new(1.0, 0.0)],
    });

    // read the matrix off the boundary slots
    let row_wires: Vec<usize> = (0..m).map(|j| wire_of[&Port::Output(j)]).collect();
    let col_wires: Vec<usize> = (0..n).map(|i| wire_of[&Port::Input(i)]).collect();
    let mut out = Matrix::zeros(1 << m, 1 << n);
    let r = acc.rank();
    for row in 0..1usize << m {
        'col: for col in 0..1usize << n {
            let mut assign: BTreeMap<usize, usize> = BTreeMap::new();
            let slots = row_wires
                .iter()
                .enumerate()
                .map(|(p, w)| (*w, (row >> (m - 1 - p)) & 1))
                .chain(
                    col_wires
                        .iter()
                        .enumerate()
                        .map(|(p, w)| (*w, (col >> (n - 1 - p)) & 1)),
                );
            for (w, bit) in slots {
                if let Some(prev) = assign.insert(w, bit) {
                    if prev != bit {
                        continue 'col;
                    }
                }
            }
            let mut off = 0usize;
            for (k, w) in acc.idx.iter().enumerate() {
                if assign[w] == 1 {
                    off |= 1 << (r - 1 - k);
                }
            }
            out.set(row, col, acc.data[off]);
        }
    }
    Ok(out)
}

fn repeated_axes(idx: &[usize]) -> Option<(usize, usize)> {
    for a in 0..idx.len() {
        for b in a + 1..idx.len() {
            if idx[a] == idx[b] {
                return Some((a, b));
            }
        }
    }
    None
}

fn shares(a: &Tensor, b: &Tensor) -> bool {
    a.idx.iter().any(|i| b.idx.contains(i))
}

fn merge(
    tensors: &mut [Option<Tensor>],
    i: usize,
    j: usize,
    cap: usize,
) -> Result<(), SemanticsError> {
    let a = tensors[i].take().expect("live tensor");
    let b = tensors[j].take().expect("live tensor");
    let (free, _) = result_indices(&a, &b);
    if free.len() > cap {
        return Err(SemanticsError::TooLarge {
            rank: free.len(),
            cap,
        });
    }
    tensors[i] = Some(contract_pair(&a, &b));
    Ok(())
}

fn contract_greedy(
    mut tensors: Vec<Option<Tensor>>,
    cap: usize,
) -> Result<Option<Tensor>, SemanticsError> {
    // wire -> tensors currently carrying it
    let mut owners: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (k, t) in tensors.iter().enumerate() {
        for w in &t.as_ref().unwrap().idx {
            owners.entry(*w).or_default().push(k);
        }
    }
    loop {
        let live: Vec<usize> = (0..tensors.len())
            .filter(|&k| tensors[k].is_some())
            .collect();
        if live.len() <= 1 {
            return Ok(live.first().and_then(|&k| tensors[k].take()));
        }
        let mut best: Option<(usize, usize, usize)> = None;
        for ts in owners.values() {
            if let [i, j] = ts[..] {
                let (i, j) = (i.min(j), i.max(j));
                let rank =
                    result_indices(tensors[i].as_ref().unwrap(), tensors[j].as_ref().unwrap())
                        .0
                        .len();
                if best.is_none_or(|b| (rank, i, j) < b) {
                    best = Some((rank, i, j));
                }
            }
        }
        let (i, j) = match best {
            Some((_, i, j)) => (i, j),
            None => {
                // disconnected components: outer product of the two smallest
                let mut by_rank = live.clone();
                by_rank.sort_by_key(|&k| (tensors[k].as_ref().unwrap().rank(), k));
                let (i, j) = (by_rank[0], by_rank[1]);
                (i.min(j), i.max(j))
            }
        };
        let gone = tensors[j].as_ref().unwrap().idx.clone();
        merge(&mut tensors, i, j, cap)?;
        for w in gone {
            let ts = owners.get_mut(&w).unwrap();
            ts.retain(|&k| k != j);
            if ts.contains(&i) {
                owners.remove(&w);
            } else {
                ts.push(i);
            }
        }
    }
}

fn contract_sequential(
    mut tensors: Vec<Option<Tensor>>,
    cap: usize,
) -> Result<Option<Tensor>, SemanticsError> {
    if tensors.is_empty() {
        return Ok(None);
    }
    for _ in 1..tensors.len() {
        let next = (1..tensors.len())
            .filter(|&j| tensors[j].is_some())
            .find(|&j| shares(tensors[0].as_ref().unwrap(), tensors[j].as_ref().unwrap()))
            .or_else(|| (1..tensors.len()).find(|&j| tensors[j].is_some()));
        if let Some(j) = next {
            merge(&mut tensors, 0, j, cap)?;
        }
    }
    Ok(tensors[0].take())
}
