//! Ready-made models used by tests, benchmarks and documentation.
//!
//! Unless stated otherwise every domain is binary `{0, 1}` and boolean
//! mechanisms use the integer-valued logical operators.

use crate::assignment::{Assignment, Team};
use crate::expr::{BinOp, Expr};
use crate::function::StructuralFunction;
use crate::model::{Sfm, SfmParts};
use crate::value::{Domain, NodeId, Value};

fn v(name: &str) -> Expr {
    Expr::var(name)
}

fn b() -> Domain {
    Domain::binary()
}

fn build(parts: SfmParts) -> Sfm {
    parts.build().expect("fixture models are valid")
}

fn copy(parts: SfmParts, node: &str, parent: &str) -> SfmParts {
    parts.endo(node, b(), StructuralFunction::copy_of(parent))
}

fn binary_op(parts: SfmParts, node: &str, l: &str, r: &str, op: BinOp) -> SfmParts {
    parts.endo(
        node,
        b(),
        StructuralFunction::expr([l, r], Expr::bin(op, v(l), v(r))),
    )
}

/// `A → B → D ← C → E` with `B = A^2`, `D = B + C`, `E = C * 7` over the real line.
pub fn example_one() -> Sfm {
    example_one_with(
        Domain::Real,
        Domain::Real,
        Domain::Real,
        Domain::Real,
        Domain::Real,
    )
}

/// [`example_one`] over finite integer ranges that every mechanism respects:
/// `A ∈ -3..3`, `C ∈ -1..1`, `B ∈ 0..9`, `D ∈ -10..10`, `E ∈ {-7, 0, 7}`.
pub fn example_one_finite() -> Sfm {
    example_one_with(
        Domain::int_range(-3, 3),
        Domain::int_range(0, 9),
        Domain::int_range(-1, 1),
        Domain::int_range(-10, 10),
        Domain::finite([-7i64, 0, 7]),
    )
}

fn example_one_with(a: Domain, b: Domain, c: Domain, d: Domain, e: Domain) -> Sfm {
    build(
        SfmParts::new()
            .exo("A", a)
            .exo("C", c)
            .endo(
                "B",
                b,
                StructuralFunction::expr(["A"], Expr::pow(v("A"), 2)),
            )
            .endo(
                "D",
                d,
                StructuralFunction::expr(["B", "C"], Expr::bin(BinOp::Add, v("B"), v("C"))),
            )
            .endo(
                "E",
                e,
                StructuralFunction::expr(["C"], Expr::bin(BinOp::Mul, v("C"), Expr::lit(7i64))),
            ),
    )
}

/// `Assassin → Death`, identity.
pub fn assassin() -> Sfm {
    build(copy(
        SfmParts::new().exo("Assassin", b()),
        "Death",
        "Assassin",
    ))
}

/// `Assassin → Bullet → Death`, identities.
pub fn assassin_chain() -> Sfm {
    let p = copy(SfmParts::new().exo("Assassin", b()), "Bullet", "Assassin");
    build(copy(p, "Death", "Bullet"))
}

/// `Bodyguard → Assassin → Survive` with two negations.
pub fn bodyguard() -> Sfm {
    build(
        SfmParts::new()
            .exo("Bodyguard", b())
            .endo(
                "Assassin",
                b(),
                StructuralFunction::expr(["Bodyguard"], Expr::not(v("Bodyguard"))),
            )
            .endo(
                "Survive",
                b(),
                StructuralFunction::expr(["Assassin"], Expr::not(v("Assassin"))),
            ),
    )
}

/// `Survive = !Poison | Antidote`.
pub fn poison_antidote() -> Sfm {
    build(
        SfmParts::new()
            .exo("Poison", b())
            .exo("Antidote", b())
            .endo(
                "Survive",
                b(),
                StructuralFunction::expr(
                    ["Poison", "Antidote"],
                    Expr::or(Expr::not(v("Poison")), v("Antidote")),
                ),
            ),
    )
}

/// `Head → Player1`, identity.
pub fn coin_flip() -> Sfm {
    build(copy(SfmParts::new().exo("Head", b()), "Player1", "Head"))
}

/// `Flower = Gardener | Queen`.
pub fn gardener_queen() -> Sfm {
    build(binary_op(
        SfmParts::new().exo("Gardener", b()).exo("Queen", b()),
        "Flower",
        "Gardener",
        "Queen",
        BinOp::Or,
    ))
}

/// `Death = Assassin1 | Assassin2`.
pub fn or_firing_squad() -> Sfm {
    build(binary_op(
        SfmParts::new().exo("Assassin1", b()).exo("Assassin2", b()),
        "Death",
        "Assassin1",
        "Assassin2",
        BinOp::Or,
    ))
}

/// `Death = Assassin1 & Assassin2`.
pub fn and_firing_squad() -> Sfm {
    build(binary_op(
        SfmParts::new().exo("Assassin1", b()).exo("Assassin2", b()),
        "Death",
        "Assassin1",
        "Assassin2",
        BinOp::And,
    ))
}

/// Assassin 2 shoots only if the early shot did not kill.
pub fn connected_preemption() -> Sfm {
    let p = copy(
        SfmParts::new().exo("Assassin1", b()),
        "EarlyDeath",
        "Assassin1",
    )
    .endo(
        "Assassin2",
        b(),
        StructuralFunction::expr(["EarlyDeath"], Expr::not(v("EarlyDeath"))),
    );
    build(binary_op(
        p,
        "LateDeath",
        "EarlyDeath",
        "Assassin2",
        BinOp::Or,
    ))
}

/// Assassin 2 shoots unconditionally.
pub fn disconnected_preemption() -> Sfm {
    let p = copy(
        SfmParts::new().exo("Assassin1", b()).exo("Assassin2", b()),
        "EarlyDeath",
        "Assassin1",
    );
    build(binary_op(
        p,
        "LateDeath",
        "EarlyDeath",
        "Assassin2",
        BinOp::Or,
    ))
}

/// `Fire = Strike & Oxygen`.
pub fn match_oxygen() -> Sfm {
    build(binary_op(
        SfmParts::new().exo("Strike", b()).exo("Oxygen", b()),
        "Fire",
        "Strike",
        "Oxygen",
        BinOp::And,
    ))
}

/// `Death = Shoot`; `Whisper` is disconnected.
pub fn whisper_shoot() -> Sfm {
    build(copy(
        SfmParts::new().exo("Whisper", b()).exo("Shoot", b()),
        "Death",
        "Shoot",
    ))
}

/// `Dodge = Boulder`, `Survive = !Boulder | Dodge`.
pub fn boulder() -> Sfm {
    let p = copy(SfmParts::new().exo("Boulder", b()), "Dodge", "Boulder");
    build(p.endo(
        "Survive",
        b(),
        StructuralFunction::expr(
            ["Boulder", "Dodge"],
            Expr::or(Expr::not(v("Boulder")), v("Dodge")),
        ),
    ))
}

/// `CanPregnant = IsWoman & !BirthControl`.
pub fn bogus_prevention() -> Sfm {
    build(
        SfmParts::new()
            .exo("IsWoman", b())
            .exo("BirthControl", b())
            .endo(
                "CanPregnant",
                b(),
                StructuralFunction::expr(
                    ["IsWoman", "BirthControl"],
                    Expr::and(v("IsWoman"), Expr::not(v("BirthControl"))),
                ),
            ),
    )
}

/// `Writer2 = !Shakespeare`, `Hamlet = Shakespeare | Writer2`.
pub fn shakespeare_subjunctive() -> Sfm {
    let p = SfmParts::new().exo("Shakespeare", b()).endo(
        "Writer2",
        b(),
        StructuralFunction::expr(["Shakespeare"], Expr::not(v("Shakespeare"))),
    );
    build(binary_op(p, "Hamlet", "Shakespeare", "Writer2", BinOp::Or))
}

/// `Hamlet = Shakespeare | Writer2` with both writers exogenous.
pub fn shakespeare_indicative() -> Sfm {
    build(binary_op(
        SfmParts::new().exo("Shakespeare", b()).exo("Writer2", b()),
        "Hamlet",
        "Shakespeare",
        "Writer2",
        BinOp::Or,
    ))
}

/// Two independent switches: `Light = LightSwitch`, `TV = TVSwitch`.
pub fn light_tv() -> Sfm {
    let p = copy(
        SfmParts::new().exo("LightSwitch", b()).exo("TVSwitch", b()),
        "Light",
        "LightSwitch",
    );
    build(copy(p, "TV", "TVSwitch"))
}

/// `B = A^2` with `A ∈ -2..2`, `B ∈ 0..4`.
pub fn square() -> Sfm {
    build(SfmParts::new().exo("A", Domain::int_range(-2, 2)).endo(
        "B",
        Domain::int_range(0, 4),
        StructuralFunction::expr(["A"], Expr::pow(v("A"), 2)),
    ))
}

/// The four observed worlds over `HighReading`, `HighTemperature`, `ColdWater`.
pub fn thermometer_team() -> Team {
    let rows = [(0i64, 0i64, 0i64), (1, 1, 0), (0, 0, 1), (0, 1, 1)];
    Team::new(rows.iter().map(|&(r, t, c)| {
        crate::assignment([("HighReading", r), ("HighTemperature", t), ("ColdWater", c)])
    }))
    .expect("rows share keys")
}

fn xor(l: Expr, r: Expr) -> Expr {
    Expr::ite(Expr::bin(BinOp::Eq, l, r), Expr::lit(0i64), Expr::lit(1i64))
}

/// A make-like build: sources `src00..` each compile to `obj00..`, and
/// `link_i` combines `obj_i` with `link_{i-1}` (parity, so every change
/// propagates). Tweaking the last source rebuilds two nodes.
pub fn make_chain(n: usize) -> Sfm {
    assert!(n > 0);
    let mut p = SfmParts::new();
    for i in 0..n {
        let src = format!("src{i:02}");
        let obj = format!("obj{i:02}");
        let link = format!("link{i:02}");
        p = p.exo(src.as_str(), b());
        p = copy(p, &obj, &src);
        if i == 0 {
            p = copy(p, &link, &obj);
        } else {
            let prev = format!("link{:02}", i - 1);
            p = p.endo(
                link.as_str(),
                b(),
                StructuralFunction::expr([obj.as_str(), prev.as_str()], xor(v(&obj), v(&prev))),
            );
        }
    }
    build(p)
}

/// A layered boolean circuit: `width` inputs, then `depth` layers of
/// `width` gates each reading two neighbours of the previous layer.
/// Gate kinds cycle through AND, OR and XOR.
pub fn circuit(width: usize, depth: usize) -> Sfm {
    assert!(width >= 2);
    let name = |layer: usize, i: usize| format!("g{layer:02}_{i:02}");
    let mut p = SfmParts::new();
    for i in 0..width {
        p = p.exo(name(0, i).as_str(), b());
    }
    for layer in 1..=depth {
        for i in 0..width {
            let l = name(layer - 1, i);
            let r = name(layer - 1, (i + 1) % width);
            let e = match (layer + i) % 3 {
                0 => Expr::and(v(&l), v(&r)),
                1 => Expr::or(v(&l), v(&r)),
                _ => xor(v(&l), v(&r)),
            };
            p = p.endo(
                name(layer, i).as_str(),
                b(),
                StructuralFunction::expr([l.as_str(), r.as_str()], e),
            );
        }
    }
    build(p)
}

/// Binds every given node to 0.
pub fn all_zero(nodes: &[NodeId]) -> Assignment {
    nodes.iter().map(|n| (n.clone(), Value::Int(0))).collect()
}
