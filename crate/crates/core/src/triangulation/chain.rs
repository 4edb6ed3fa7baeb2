use std::collections::BTreeMap;

/// Formal integer combination of oriented simplices.
///
/// Keys are sorted vertex tuples; the coefficient is relative to the sorted
/// orientation, so `[b, a]` is stored as `-1 * [a, b]`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Chain {
    terms: BTreeMap<Vec<usize>, i64>,
}

/// Sorts `simplex` in place and returns the parity of the sorting permutation,
/// or `None` when a vertex repeats (degenerate simplex).
pub(crate) fn sort_with_sign(simplex: &mut [usize]) -> Option<i64> {
    let mut sign = 1;
    for i in 1..simplex.len() {
        let mut k = i;
        while k > 0 && simplex[k - 1] > simplex[k] {
            simplex.swap(k - 1, k);
            sign = -sign;
            k -= 1;
        }
        if k > 0 && simplex[k - 1] == simplex[k] {
            return None;
        }
    }
    Some(sign)
}

impl Chain {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `coeff * [simplex]` with `simplex` in the given vertex order.
    pub fn add_oriented(&mut self, simplex: &[usize], coeff: i64) {
        let mut key = simplex.to_vec();
        let Some(sign) = sort_with_sign(&mut key) else {
            return;
        };
        let entry = self.terms.entry(key.clone()).or_insert(0);
        *entry += sign * coeff;
        if *entry == 0 {
            self.terms.remove(&key);
        }
    }

    /// Coefficient of the oriented simplex `simplex` (order matters).
    pub fn coefficient(&self, simplex: &[usize]) -> i64 {
        let mut key = simplex.to_vec();
        match sort_with_sign(&mut key) {
            Some(sign) => sign * self.terms.get(&key).copied().unwrap_or(0),
            None => 0,
        }
    }

    /// Terms keyed by sorted tuple.
    pub fn terms(&self) -> impl Iterator<Item = (&[usize], i64)> {
        self.terms.iter().map(|(k, &c)| (k.as_slice(), c))
    }

    /// Terms rewritten so every coefficient is positive, swapping the first two
    /// vertices where needed.
    pub fn oriented_terms(&self) -> Vec<(Vec<usize>, i64)> {
        self.terms
            .iter()
            .map(|(key, &c)| {
                let mut simplex = key.clone();
                if c < 0 && simplex.len() >= 2 {
                    simplex.swap(0, 1);
                    (simplex, -c)
                } else {
                    (simplex, c)
                }
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `∂[v_1..v_k] = Σ (-1)^(i-1) [v_1..v̂_i..v_k]`, extended linearly.
    pub fn boundary(&self) -> Chain {
        let mut out = Chain::new();
        for (key, &coeff) in &self.terms {
            if key.len() <= 1 {
                continue;
            }
            for omit in 0..key.len() {
                let face: Vec<usize> = key
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != omit)
                    .map(|(_, &v)| v)
                    .collect();
                let sign = if omit % 2 == 0 { 1 } else { -1 };
                out.add_oriented(&face, sign * coeff);
            }
        }
        out
    }
}
