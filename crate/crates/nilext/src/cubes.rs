//! Host-Kra cube sets of degree-k abelian group structures.
//!
//! Vertices of the discrete n-cube are bitmasks (bit `i` = coordinate `i`,
//! little-endian). A map `{0,1}^n -> A` is a cube of the degree-k structure
//! on `A` iff every (k+1)-dimensional face has vanishing alternating sum;
//! for these filtrations that linear test agrees with the generator picture
//! (sums of constants on faces of codimension at most k), which
//! `is_cube_by_generators` checks independently on cyclic groups.

use crate::abgroup::{FinAbGroup, GroupElement};
use crate::error::{Error, Result};
use crate::matrix::{solve_diophantine, IntMat};
use std::collections::HashSet;

/// Complete table `{0,1}^n -> A`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CubeMap {
    group: FinAbGroup,
    dim: usize,
    values: Vec<GroupElement>,
}

impl CubeMap {
    pub fn new(group: FinAbGroup, dim: usize, values: Vec<GroupElement>) -> Result<Self> {
        if values.len() != 1 << dim {
            return Err(Error::Mismatch(format!(
                "cube of dimension {} needs {} values, got {}",
                dim,
                1 << dim,
                values.len()
            )));
        }
        for v in &values {
            if v.group() != &group {
                return Err(Error::Mismatch("cube value from a different group".into()));
            }
        }
        Ok(CubeMap { group, dim, values })
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn value(&self, vertex: usize) -> &GroupElement {
        &self.values[vertex]
    }

    pub fn values(&self) -> &[GroupElement] {
        &self.values
    }

    /// Restriction to the face with free coordinates `free` (a bitmask of
    /// size `m`) and the remaining coordinates fixed to the bits of `fixed`.
    pub fn restrict(&self, free: usize, fixed: usize) -> CubeMap {
        let m = (free as u32).count_ones() as usize;
        let free_bits: Vec<usize> = (0..self.dim).filter(|&i| free >> i & 1 == 1).collect();
        let mut values = Vec::with_capacity(1 << m);
        for w in 0..1usize << m {
            let mut vertex = fixed & !free;
            for (bit, &coord) in free_bits.iter().enumerate() {
                if w >> bit & 1 == 1 {
                    vertex |= 1 << coord;
                }
            }
            values.push(self.values[vertex].clone());
        }
        CubeMap {
            group: self.group.clone(),
            dim: m,
            values,
        }
    }
}

/// Signed alternating sum over the whole cube, signs `(-1)^(dim - |v|)`.
fn alternating_sum(c: &CubeMap) -> GroupElement {
    let mut acc = c.group.zero();
    for v in 0..c.values.len() {
        let weight = (v as u32).count_ones() as usize;
        let term = if (c.dim - weight) % 2 == 0 {
            c.values[v].clone()
        } else {
            c.values[v].neg()
        };
        acc = acc.add(&term);
    }
    acc
}

/// Membership in the degree-`k` cube set: every `(k+1)`-face has vanishing
/// alternating sum. Maps on cubes of dimension at most `k` are always cubes.
pub fn is_cube(c: &CubeMap, k: u32) -> bool {
    let n = c.dim;
    let f = k as usize + 1;
    if n < f {
        return true;
    }
    for free in subsets_of_size(n, f) {
        let complement_bits: Vec<usize> = (0..n).filter(|&i| free >> i & 1 == 0).collect();
        for assign in 0..1usize << complement_bits.len() {
            let mut fixed = 0usize;
            for (bit, &coord) in complement_bits.iter().enumerate() {
                if assign >> bit & 1 == 1 {
                    fixed |= 1 << coord;
                }
            }
            let face = c.restrict(free, fixed);
            if !alternating_sum(&face).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Gray-code signature of a `k`-dimensional cube:
/// `sum_v (-1)^(k - |v|) c(v)`.
pub fn gray_code(c: &CubeMap, k: u32) -> Result<GroupElement> {
    if c.dim != k as usize {
        return Err(Error::Mismatch(format!(
            "gray code of a {}-cube requested on dimension {}",
            k, c.dim
        )));
    }
    Ok(alternating_sum(c))
}

/// Number of degree-`k` cubes on the `n`-cube: `|A|^(sum_{j<=k} binom(n,j))`.
pub fn cube_count(group: &FinAbGroup, k: u32, n: usize) -> u128 {
    let params: u32 = (0..=k.min(n as u32)).map(|j| binom_u32(n as u32, j)).sum();
    (group.order() as u128).pow(params)
}

/// All cubes, generated from one free parameter per subset of coordinates of
/// size at most `k`: `c(v) = sum_{S subset supp(v), |S| <= k} t_S`.
pub fn enumerate_cubes(
    group: &FinAbGroup,
    k: u32,
    n: usize,
    budget: u128,
) -> Result<Vec<CubeMap>> {
    let total = cube_count(group, k, n);
    if total > budget {
        return Err(Error::Budget {
            what: format!("cube enumeration on {:?}, k={}, n={}", group, k, n),
            needed: total,
            budget,
        });
    }
    let params: Vec<usize> = (0..1usize << n)
        .filter(|s| (s.count_ones()) <= k)
        .collect();
    let order = group.order();
    let mut out = Vec::with_capacity(total as usize);
    let mut assignment = vec![0i128; params.len()];
    loop {
        let values: Vec<GroupElement> = (0..1usize << n)
            .map(|v| {
                let mut acc = group.zero();
                for (pi, &s) in params.iter().enumerate() {
                    if s & v == s {
                        acc = acc.add(&group.element_at(assignment[pi]).mul_int(1));
                    }
                }
                acc
            })
            .collect();
        out.push(CubeMap {
            group: group.clone(),
            dim: n,
            values,
        });
        // increment the mixed-radix assignment
        let mut i = 0;
        loop {
            if i == assignment.len() {
                return Ok(out);
            }
            assignment[i] += 1;
            if assignment[i] < order {
                break;
            }
            assignment[i] = 0;
            i += 1;
        }
    }
}

/// Corner: all vertices except the top one.
#[derive(Clone, Debug)]
pub struct Corner {
    group: FinAbGroup,
    dim: usize,
    /// Values indexed by vertex, top vertex absent.
    values: Vec<GroupElement>,
}

impl Corner {
    pub fn new(group: FinAbGroup, dim: usize, values: Vec<GroupElement>) -> Result<Self> {
        if values.len() != (1 << dim) - 1 {
            return Err(Error::Mismatch(format!(
                "corner of dimension {} needs {} values",
                dim,
                (1 << dim) - 1
            )));
        }
        Ok(Corner { group, dim, values })
    }

    pub fn value(&self, vertex: usize) -> &GroupElement {
        assert!(vertex + 1 < 1 << self.dim, "top vertex is not in the corner");
        &self.values[vertex]
    }

    /// From a full cube map, forgetting the top value.
    pub fn from_cube(c: &CubeMap) -> Corner {
        Corner {
            group: c.group.clone(),
            dim: c.dim,
            values: c.values[..c.values.len() - 1].to_vec(),
        }
    }
}

/// Completes a corner to a degree-`k` cube. The corner's coordinate faces
/// must be cubes. For `n >= k + 1` the completion is unique; below that the
/// free top parameter is filled canonically with zero.
pub fn complete_corner(corner: &Corner, k: u32) -> Result<CubeMap> {
    let n = corner.dim;
    let top = (1usize << n) - 1;
    // the n coordinate faces avoiding the top vertex must be cubes
    for i in 0..n {
        let face_free = top & !(1 << i);
        let mut values = Vec::with_capacity(1 << (n - 1));
        for w in 0..1usize << (n - 1) {
            let mut vertex = 0usize;
            let mut bit = 0;
            for coord in 0..n {
                if coord == i {
                    continue;
                }
                if w >> bit & 1 == 1 {
                    vertex |= 1 << coord;
                }
                bit += 1;
            }
            values.push(corner.value(vertex).clone());
        }
        let _ = face_free;
        let face = CubeMap {
            group: corner.group.clone(),
            dim: n - 1,
            values,
        };
        if !is_cube(&face, k) {
            return Err(Error::Precondition(format!(
                "corner face with coordinate {} fixed to 0 is not a cube",
                i
            )));
        }
    }

    // Moebius parameters t_S = sum_{T subset S} (-1)^(|S|-|T|) c(1_T) for all
    // S except the full set; the top value is then the parameter sum, with
    // the full-set parameter (free iff n <= k) filled with zero.
    let mut total = corner.group.zero();
    for s in 0..top {
        if (s as u32).count_ones() > k {
            continue;
        }
        let mut t = corner.group.zero();
        let mut sub = s;
        loop {
            let term = corner.value(sub).clone();
            let signs = ((s as u32).count_ones() - (sub as u32).count_ones()) % 2;
            t = t.add(&if signs == 0 { term } else { term.neg() });
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & s;
        }
        total = total.add(&t);
    }

    let mut values = corner.values.clone();
    values.push(total);
    let cube = CubeMap {
        group: corner.group.clone(),
        dim: n,
        values,
    };
    if !is_cube(&cube, k) {
        return Err(Error::Precondition(
            "corner admits no degree-k completion".into(),
        ));
    }
    Ok(cube)
}

/// Number of distinct Gray-code signature tuples over the lower `k`-faces
/// through the origin, across all degree-`k` cubes. Equals
/// `|A|^binom(n,k)`.
pub fn signature_image_count(
    group: &FinAbGroup,
    k: u32,
    n: usize,
    budget: u128,
) -> Result<u128> {
    let cubes = enumerate_cubes(group, k, n, budget)?;
    let faces: Vec<usize> = if (k as usize) > n {
        Vec::new()
    } else {
        subsets_of_size(n, k as usize)
    };
    let mut signatures: HashSet<Vec<Vec<i128>>> = HashSet::new();
    for c in &cubes {
        let mut tuple = Vec::with_capacity(faces.len());
        for &free in &faces {
            let face = c.restrict(free, 0);
            let sig = gray_code(&face, k)?;
            tuple.push(sig.coords().to_vec());
        }
        signatures.insert(tuple);
    }
    Ok(signatures.len() as u128)
}

/// Independent membership test on cyclic groups straight from the generator
/// definition: `c` is a cube iff it is an integer combination of indicator
/// vectors of faces of codimension at most `k`.
pub fn is_cube_by_generators(c: &CubeMap, k: u32) -> Result<bool> {
    if c.group.rank() != 1 {
        return Err(Error::Mismatch(
            "generator membership test implemented for cyclic groups".into(),
        ));
    }
    let m = c.group.factors()[0];
    let n = c.dim;
    let verts = 1usize << n;
    let mut cols: Vec<Vec<i128>> = Vec::new();
    // faces: choose the fixed coordinate set I with |I| <= k and its values
    for fixed_set in 0..1usize << n {
        if (fixed_set as u32).count_ones() > k {
            continue;
        }
        for assign_bits in 0..1usize << (fixed_set as u32).count_ones() {
            let fixed_coords: Vec<usize> =
                (0..n).filter(|&i| fixed_set >> i & 1 == 1).collect();
            let mut assign = 0usize;
            for (bit, &coord) in fixed_coords.iter().enumerate() {
                if assign_bits >> bit & 1 == 1 {
                    assign |= 1 << coord;
                }
            }
            let col: Vec<i128> = (0..verts)
                .map(|v| if v & fixed_set == assign { 1 } else { 0 })
                .collect();
            cols.push(col);
        }
    }
    // membership of c in the mod-m span of the columns
    let k_cols = cols.len();
    let mut a = IntMat::zero(verts, k_cols + verts);
    for (j, col) in cols.iter().enumerate() {
        for i in 0..verts {
            a[(i, j)] = col[i];
        }
    }
    for i in 0..verts {
        a[(i, k_cols + i)] = m;
    }
    let b: Vec<i128> = (0..verts).map(|v| c.values[v].coords()[0]).collect();
    Ok(solve_diophantine(&a, &b).is_some())
}

fn binom_u32(n: u32, j: u32) -> u32 {
    crate::rat::binom_int(n as i128, j) as u32
}

/// All size-`m` subsets of `{0..n}` as bitmasks, ascending.
fn subsets_of_size(n: usize, m: usize) -> Vec<usize> {
    (0..1usize << n)
        .filter(|s| (s.count_ones() as usize) == m)
        .collect()
}
