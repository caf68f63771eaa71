//! Built-in groups: the Hantzsche-Wendt group with its named generators, the
//! Klein-bottle group, and a small corpus of torsion-free groups with cyclic
//! holonomy used by the certificate machinery.

use crate::character::Character;
use crate::group::{word, CrystGroup, GroupElement, Word};
use crate::holonomy::HolonomyGroup;
use crate::limits::Stratum;
use crate::linalg::IntMat;
use crate::monomial::{Monomial, SymbolTable};
use crate::{rat, rat_int, Rat};
use std::collections::BTreeMap;

fn rvec(coords: &[(i64, i64)]) -> Vec<Rat> {
    coords.iter().map(|&(p, q)| rat(p, q)).collect()
}

/// The Hantzsche-Wendt group: rank 3, holonomy Z/2 x Z/2, realized by the
/// classical rigid motions with diagonal linear parts and half-integer
/// translations. Named generators `x`, `y`, `z` with `z = (xy)^{-1}`.
pub fn hantzsche_wendt() -> CrystGroup {
    hantzsche_wendt_with_first_translation(rvec(&[(1, 2), (1, 2), (0, 1)]))
        .expect("builtin group is valid")
}

/// Variant of [`hantzsche_wendt`] with a caller-supplied translation for the
/// first holonomy generator; used to exercise the cocycle validation.
pub fn hantzsche_wendt_with_first_translation(
    a_x: Vec<Rat>,
) -> crate::Result<CrystGroup> {
    let holonomy = HolonomyGroup::new(
        vec!["e".into(), "x".into(), "y".into(), "z".into()],
        vec![
            vec![0, 1, 2, 3],
            vec![1, 0, 3, 2],
            vec![2, 3, 0, 1],
            vec![3, 2, 1, 0],
        ],
        0,
    )?;
    let lin = vec![
        IntMat::identity(3),
        IntMat::from_rows(&[vec![1, 0, 0], vec![0, -1, 0], vec![0, 0, -1]]),
        IntMat::from_rows(&[vec![-1, 0, 0], vec![0, 1, 0], vec![0, 0, -1]]),
        IntMat::from_rows(&[vec![-1, 0, 0], vec![0, -1, 0], vec![0, 0, 1]]),
    ];
    let trans = vec![
        rvec(&[(0, 1), (0, 1), (0, 1)]),
        a_x.clone(),
        rvec(&[(0, 1), (1, 2), (1, 2)]),
        rvec(&[(1, 2), (0, 1), (1, 2)]),
    ];
    let mut gens = BTreeMap::new();
    gens.insert("x".to_string(), GroupElement { v: a_x, h: 1 });
    gens.insert("y".to_string(), GroupElement { v: trans[2].clone(), h: 2 });
    gens.insert("z".to_string(), GroupElement { v: trans[3].clone(), h: 3 });
    CrystGroup::new(3, holonomy, lin, trans, gens)
}

/// Relations of the Hantzsche-Wendt group as word pairs, tagged by a name
/// prefix: `defining.*`, `conj.*` for the conjugation table of the squares,
/// and `ident.*` for the rewriting identities used by the induced-matrix
/// computations.
pub fn hantzsche_wendt_relations() -> Vec<(Word, Word, String)> {
    let r = |name: &str, lhs: &[(&str, i64)], rhs: &[(&str, i64)]| {
        (word(lhs), word(rhs), name.to_string())
    };
    vec![
        r("defining.x2yx2=y", &[("x", 2), ("y", 1), ("x", 2)], &[("y", 1)]),
        r("defining.y2xy2=x", &[("y", 2), ("x", 1), ("y", 2)], &[("x", 1)]),
        r("defining.xyz=e", &[("x", 1), ("y", 1), ("z", 1)], &[]),
        r("conj.x.x2", &[("x", 1), ("x", 2), ("x", -1)], &[("x", 2)]),
        r("conj.x.y2", &[("x", 1), ("y", 2), ("x", -1)], &[("y", -2)]),
        r("conj.x.z2", &[("x", 1), ("z", 2), ("x", -1)], &[("z", -2)]),
        r("conj.y.x2", &[("y", 1), ("x", 2), ("y", -1)], &[("x", -2)]),
        r("conj.y.y2", &[("y", 1), ("y", 2), ("y", -1)], &[("y", 2)]),
        r("conj.y.z2", &[("y", 1), ("z", 2), ("y", -1)], &[("z", -2)]),
        r("conj.z.x2", &[("z", 1), ("x", 2), ("z", -1)], &[("x", -2)]),
        r("conj.z.y2", &[("z", 1), ("y", 2), ("z", -1)], &[("y", -2)]),
        r("conj.z.z2", &[("z", 1), ("z", 2), ("z", -1)], &[("z", 2)]),
        r(
            "ident.x-1y=yxy2z-2",
            &[("x", -1), ("y", 1)],
            &[("y", 1), ("x", 1), ("y", 2), ("z", -2)],
        ),
        r(
            "ident.x-1y=zx2z-2",
            &[("x", -1), ("y", 1)],
            &[("z", 1), ("x", 2), ("z", -2)],
        ),
        r("ident.x-1z=yz2", &[("x", -1), ("z", 1)], &[("y", 1), ("z", 2)]),
        r("ident.y-1x=zx2", &[("y", -1), ("x", 1)], &[("z", 1), ("x", 2)]),
        r("ident.y-1z=x-1y2", &[("y", -1), ("z", 1)], &[("x", -1), ("y", 2)]),
    ]
}

/// The four coordinate strata of the Hantzsche-Wendt dual torus, with the
/// transversals used by the explicit matrix forms.
pub fn hantzsche_wendt_strata(group: &CrystGroup) -> Vec<Stratum> {
    let e = group.identity();
    let x = group.generator("x").unwrap().clone();
    let y = group.generator("y").unwrap().clone();
    let z = group.generator("z").unwrap().clone();
    let single = |pos: usize, name: &str| {
        let table = SymbolTable::new([name]);
        let coords = (0..3)
            .map(|i| if i == pos { Monomial::symbol(0, 1) } else { Monomial::one(1) })
            .collect();
        Character::new(table, coords)
    };
    vec![
        Stratum {
            name: "(u,1,1)".into(),
            character: single(0, "u"),
            transversal: Some(vec![e.clone(), y.clone()]),
        },
        Stratum {
            name: "(1,v,1)".into(),
            character: single(1, "v"),
            transversal: Some(vec![e.clone(), x.clone()]),
        },
        Stratum {
            name: "(1,1,w)".into(),
            character: single(2, "w"),
            transversal: Some(vec![e.clone(), y]),
        },
        Stratum {
            name: "(u,v,w)".into(),
            character: Character::generic(&["u", "v", "w"]),
            transversal: Some(vec![e, x, group.generator("y").unwrap().clone(), z]),
        },
    ]
}

/// The Klein-bottle group: rank 2, holonomy Z/2 flipping the second
/// coordinate, `x^2` the first unit translation. Generators `x` and the
/// flipped translation `t`.
pub fn klein_bottle() -> CrystGroup {
    let holonomy = HolonomyGroup::new(
        vec!["e".into(), "g".into()],
        vec![vec![0, 1], vec![1, 0]],
        0,
    )
    .unwrap();
    let lin = vec![
        IntMat::identity(2),
        IntMat::from_rows(&[vec![1, 0], vec![0, -1]]),
    ];
    let trans = vec![rvec(&[(0, 1), (0, 1)]), rvec(&[(1, 2), (0, 1)])];
    let mut gens = BTreeMap::new();
    gens.insert("x".to_string(), GroupElement { v: trans[1].clone(), h: 1 });
    gens.insert(
        "t".to_string(),
        GroupElement { v: rvec(&[(0, 1), (1, 1)]), h: 0 },
    );
    CrystGroup::new(2, holonomy, lin, trans, gens).expect("builtin group is valid")
}

pub fn klein_bottle_relations() -> Vec<(Word, Word, String)> {
    vec![(
        word(&[("x", 1), ("t", 1), ("x", -1)]),
        word(&[("t", -1)]),
        "defining.xtx-1=t-1".to_string(),
    )]
}

pub fn klein_bottle_strata(group: &CrystGroup) -> Vec<Stratum> {
    let e = group.identity();
    let x = group.generator("x").unwrap().clone();
    let single = |pos: usize, name: &str| {
        let table = SymbolTable::new([name]);
        let coords = (0..2)
            .map(|i| if i == pos { Monomial::symbol(0, 1) } else { Monomial::one(1) })
            .collect();
        Character::new(table, coords)
    };
    vec![
        Stratum {
            name: "(u,1)".into(),
            character: single(0, "u"),
            transversal: Some(vec![e.clone()]),
        },
        Stratum {
            name: "(1,v)".into(),
            character: single(1, "v"),
            transversal: Some(vec![e, x]),
        },
    ]
}

/// The infinite cyclic group as a rank-1 lattice with trivial holonomy.
pub fn group_z() -> CrystGroup {
    let mut gens = BTreeMap::new();
    gens.insert("t".to_string(), GroupElement { v: vec![rat_int(1)], h: 0 });
    CrystGroup::new(
        1,
        HolonomyGroup::trivial(),
        vec![IntMat::identity(1)],
        vec![vec![rat_int(0)]],
        gens,
    )
    .expect("builtin group is valid")
}

/// `Z^2` with trivial holonomy.
pub fn group_z2() -> CrystGroup {
    let mut gens = BTreeMap::new();
    gens.insert("t1".to_string(), GroupElement { v: rvec(&[(1, 1), (0, 1)]), h: 0 });
    gens.insert("t2".to_string(), GroupElement { v: rvec(&[(0, 1), (1, 1)]), h: 0 });
    CrystGroup::new(
        2,
        HolonomyGroup::trivial(),
        vec![IntMat::identity(2)],
        vec![rvec(&[(0, 1), (0, 1)])],
        gens,
    )
    .expect("builtin group is valid")
}

/// Rank-1 torsion-free extension of Z/2 by Z: generated by `t` and `x` with
/// `x^2 = t` (the holonomy acts trivially on the lattice).
pub fn rank1_double_cover() -> CrystGroup {
    let mut gens = BTreeMap::new();
    gens.insert("x".to_string(), GroupElement { v: vec![rat(1, 2)], h: 1 });
    gens.insert("t".to_string(), GroupElement { v: vec![rat_int(1)], h: 0 });
    CrystGroup::new(
        1,
        HolonomyGroup::cyclic(2),
        vec![IntMat::identity(1), IntMat::identity(1)],
        vec![vec![rat_int(0)], vec![rat(1, 2)]],
        gens,
    )
    .expect("builtin group is valid")
}

/// Rank-1 point reflection: Z/2 acting by -1 with zero translation. Has
/// torsion; used as a negative test input.
pub fn rank1_point_reflection() -> CrystGroup {
    let mut gens = BTreeMap::new();
    gens.insert("s".to_string(), GroupElement { v: vec![rat_int(0)], h: 1 });
    gens.insert("t".to_string(), GroupElement { v: vec![rat_int(1)], h: 0 });
    CrystGroup::new(
        1,
        HolonomyGroup::cyclic(2),
        vec![IntMat::identity(1), IntMat::from_rows(&[vec![-1]])],
        vec![vec![rat_int(0)], vec![rat_int(0)]],
        gens,
    )
    .expect("builtin group is valid")
}

/// Rank-3 torsion-free group with holonomy Z/3 (an order-3 rotation of the
/// last two coordinates, one third of a unit translation along the first).
pub fn tricosm() -> CrystGroup {
    let a = IntMat::from_rows(&[vec![1, 0, 0], vec![0, 0, -1], vec![0, 1, -1]]);
    let lin = vec![IntMat::identity(3), a.clone(), a.pow(2)];
    let trans = vec![
        rvec(&[(0, 1), (0, 1), (0, 1)]),
        rvec(&[(1, 3), (0, 1), (0, 1)]),
        rvec(&[(2, 3), (0, 1), (0, 1)]),
    ];
    let mut gens = BTreeMap::new();
    gens.insert("g".to_string(), GroupElement { v: trans[1].clone(), h: 1 });
    for (i, name) in ["t1", "t2", "t3"].iter().enumerate() {
        let mut v = vec![rat_int(0); 3];
        v[i] = rat_int(1);
        gens.insert(name.to_string(), GroupElement { v, h: 0 });
    }
    CrystGroup::new(3, HolonomyGroup::cyclic(3), lin, trans, gens)
        .expect("builtin group is valid")
}

/// Rank-3 torsion-free group with holonomy Z/4 (a quarter turn of the last
/// two coordinates, one quarter of a unit translation along the first).
pub fn tetracosm() -> CrystGroup {
    let a = IntMat::from_rows(&[vec![1, 0, 0], vec![0, 0, -1], vec![0, 1, 0]]);
    let lin = vec![IntMat::identity(3), a.clone(), a.pow(2), a.pow(3)];
    let trans = (0..4).map(|k| rvec(&[(k, 4), (0, 1), (0, 1)])).collect();
    let mut gens = BTreeMap::new();
    gens.insert("g".to_string(), GroupElement { v: rvec(&[(1, 4), (0, 1), (0, 1)]), h: 1 });
    for (i, name) in ["t1", "t2", "t3"].iter().enumerate() {
        let mut v = vec![rat_int(0); 3];
        v[i] = rat_int(1);
        gens.insert(name.to_string(), GroupElement { v, h: 0 });
    }
    CrystGroup::new(3, HolonomyGroup::cyclic(4), lin, trans, gens)
        .expect("builtin group is valid")
}

/// Direct product of two crystallographic groups: concatenated lattices,
/// product holonomy with labels `"l|r"`, block-diagonal linear parts.
/// Generator names are suffixed `.1` / `.2`.
pub fn direct_product(left: &CrystGroup, right: &CrystGroup) -> CrystGroup {
    let (h1, h2) = (&left.holonomy, &right.holonomy);
    let (n1, n2) = (h1.order(), h2.order());
    let idx = |i: usize, j: usize| i * n2 + j;
    let labels: Vec<String> = (0..n1)
        .flat_map(|i| (0..n2).map(move |j| (i, j)))
        .map(|(i, j)| format!("{}|{}", h1.label(i), h2.label(j)))
        .collect();
    let mut mult = vec![vec![0usize; n1 * n2]; n1 * n2];
    for i in 0..n1 {
        for j in 0..n2 {
            for k in 0..n1 {
                for l in 0..n2 {
                    mult[idx(i, j)][idx(k, l)] = idx(h1.mul(i, k), h2.mul(j, l));
                }
            }
        }
    }
    let holonomy =
        HolonomyGroup::new(labels, mult, idx(h1.identity(), h2.identity())).unwrap();
    let rank = left.rank + right.rank;
    let mut lin = Vec::new();
    let mut trans = Vec::new();
    for i in 0..n1 {
        for j in 0..n2 {
            let mut m = IntMat::zero(rank, rank);
            for r in 0..left.rank {
                for c in 0..left.rank {
                    m[(r, c)] = left.lin(i)[(r, c)];
                }
            }
            for r in 0..right.rank {
                for c in 0..right.rank {
                    m[(left.rank + r, left.rank + c)] = right.lin(j)[(r, c)];
                }
            }
            lin.push(m);
            let mut t = left.trans(i).to_vec();
            t.extend_from_slice(right.trans(j));
            trans.push(t);
        }
    }
    let mut gens = BTreeMap::new();
    for (name, g) in left.generators() {
        let mut v = g.v.clone();
        v.extend(std::iter::repeat(rat_int(0)).take(right.rank));
        gens.insert(format!("{name}.1"), GroupElement { v, h: idx(g.h, h2.identity()) });
    }
    for (name, g) in right.generators() {
        let mut v = vec![rat_int(0); left.rank];
        v.extend(g.v.iter().cloned());
        gens.insert(format!("{name}.2"), GroupElement { v, h: idx(h1.identity(), g.h) });
    }
    CrystGroup::new(rank, holonomy, lin, trans, gens).expect("product of valid groups")
}

/// `Z x (Klein bottle)`: rank 3, cyclic holonomy Z/2. The certificate
/// construction lands in the `b = 1` branch for this group.
pub fn z_cross_klein_bottle() -> CrystGroup {
    direct_product(&group_z(), &klein_bottle())
}

/// `tricosm x (Klein bottle)`: rank 5, cyclic holonomy Z/6. The certificate
/// construction lands in the `a > 1, b > 1` branch, exercising the
/// generator-lifting arithmetic.
pub fn tricosm_cross_klein_bottle() -> CrystGroup {
    direct_product(&tricosm(), &klein_bottle())
}
