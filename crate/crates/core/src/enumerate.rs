use crate::value::Value;

/// Cartesian product in odometer order (last coordinate fastest).
/// The product of zero factors yields one empty tuple.
pub fn product<'a>(factors: &'a [&'a [Value]]) -> Product<'a> {
    let done = factors.iter().any(|f| f.is_empty());
    Product {
        factors,
        idx: vec![0; factors.len()],
        done,
    }
}

pub struct Product<'a> {
    factors: &'a [&'a [Value]],
    idx: Vec<usize>,
    done: bool,
}

impl Iterator for Product<'_> {
    type Item = Vec<Value>;

    fn next(&mut self) -> Option<Vec<Value>> {
        if self.done {
            return None;
        }
        let out = self
            .idx
            .iter()
            .zip(self.factors)
            .map(|(&i, f)| f[i].clone())
            .collect();
        self.done = true;
        for pos in (0..self.idx.len()).rev() {
            self.idx[pos] += 1;
            if self.idx[pos] < self.factors[pos].len() {
                self.done = false;
                break;
            }
            self.idx[pos] = 0;
        }
        Some(out)
    }
}
