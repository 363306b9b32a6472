//! The switch-circuit family: `n` binary switches `X1..Xn` and one light `Y`
//! computed by an arbitrary Boolean table.

use crate::function::StructuralFunction;
use crate::model::{Sfm, SfmParts};
use crate::value::{Domain, NodeId, Value};

/// Circuit number `code`: bit `i` of `code` is `Y` on the input whose
/// binary digits (`X1` most significant) spell `i`. Requires `n <= 6` and
/// `code < 2^(2^n)`.
pub fn switch_circuit(n: usize, code: u64) -> Sfm {
    assert!(n <= 6, "at most 6 switches");
    let rows = 1usize << n;
    assert!(rows == 64 || code < (1u64 << rows), "code out of range");
    let xs: Vec<NodeId> = (1..=n).map(|i| NodeId::new(format!("X{i}"))).collect();
    let table = (0..rows).map(|i| {
        let inputs = (0..n)
            .map(|k| Value::Int(((i >> (n - 1 - k)) & 1) as i64))
            .collect();
        (inputs, Value::Int(((code >> i) & 1) as i64))
    });
    let mut parts = SfmParts::new();
    for x in &xs {
        parts = parts.exo(x.clone(), Domain::binary());
    }
    parts
        .endo("Y", Domain::binary(), StructuralFunction::table(xs, table))
        .build()
        .expect("switch circuits are valid")
}

/// All `2^(2^n)` circuits over `n <= 4` switches, by code.
pub fn switch_circuits(n: usize) -> impl Iterator<Item = Sfm> {
    assert!(n <= 4, "at most 4 switches");
    (0..1u64 << (1u64 << n)).map(move |code| switch_circuit(n, code))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assignment::assignment;
    use crate::infer::vfi;

    #[test]
    fn family_sizes_and_distinct_tables() {
        assert_eq!(switch_circuits(1).count(), 4);
        assert_eq!(switch_circuits(2).count(), 16);
        let all: Vec<Sfm> = switch_circuits(3).collect();
        assert_eq!(all.len(), 256);
        let bodies: std::collections::BTreeSet<String> = all
            .iter()
            .map(|m| format!("{:?}", m.function("Y").unwrap().body))
            .collect();
        assert_eq!(bodies.len(), 256);
    }

    #[test]
    fn code_bits_index_inputs() {
        // 0b1000: only the all-on input lights the bulb (AND).
        let and = switch_circuit(2, 0b1000);
        let y = |a, b| {
            vfi(&and, &assignment([("X1", a), ("X2", b)]))
                .unwrap()
                .world
                .get("Y")
                .cloned()
        };
        assert_eq!(y(1i64, 1i64), Some(Value::Int(1)));
        assert_eq!(y(1, 0), Some(Value::Int(0)));
        // 0b0100: index 2 is X1=1, X2=0.
        let m = switch_circuit(2, 0b0100);
        assert_eq!(
            vfi(&m, &assignment([("X1", 1i64), ("X2", 0)]))
                .unwrap()
                .world
                .get("Y"),
            Some(&Value::Int(1))
        );
    }
}
