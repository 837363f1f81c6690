//! Matrix-valued differential forms and the flat exterior calculus.
//!
//! A [`FormField`] stores one n×n complex block per node and per sorted index
//! combination i₁<…<i_p. Fields produced by [`FormField::sample`] are su(n)-
//! valued; operator outputs (wedge products in particular) live in the full
//! matrix algebra, which is what trace integrands need.
//!
//! Derivatives are second-order finite differences — centered on periodic
//! axes, one-sided at interval endpoints — so d∘d = 0 holds to roundoff
//! (stencils on distinct axes commute), while identities that rely on
//! integration by parts hold at second order and exactly on tori. The Hodge
//! star is a signed index complement: coordinates are physical arc length, so
//! the flat metric carries no extra factors. Integrals use cell-volume
//! weights with trapezoid halving at interval ends and a deterministic
//! pairwise reduction, making every reported scalar bit-stable.

use crate::error::{Error, Result};
use crate::kernels as k;
use crate::lie::AlgElement;
use crate::mesh::{Mesh, Topology, MAX_DIM};
use crate::scalar::{czero, C, Real};

// ---------------------------------------------------------------------------
// index-combination tables
// ---------------------------------------------------------------------------

/// Sorted index combinations of size `p` drawn from `0..dim`, lexicographic.
pub(crate) fn index_combos(dim: usize, p: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(p);
    fn rec(dim: usize, p: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..dim {
            cur.push(i);
            rec(dim, p, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(dim, p, 0, &mut cur, &mut out);
    out
}

/// Position of a sorted combination in its lexicographic table.
pub(crate) fn comb_rank(combos: &[Vec<usize>], key: &[usize]) -> usize {
    combos
        .iter()
        .position(|c| c.as_slice() == key)
        .expect("combination not in table")
}

/// Sign of the shuffle merging disjoint sorted `i` and `j` into one sorted
/// list; `None` if they share an index.
pub(crate) fn merge_sign(i: &[usize], j: &[usize]) -> Option<i32> {
    let mut inversions = 0usize;
    for &a in i {
        for &b in j {
            if a == b {
                return None;
            }
            if a > b {
                inversions += 1;
            }
        }
    }
    Some(if inversions % 2 == 0 { 1 } else { -1 })
}

/// Sorted complement of `key` inside `0..dim`.
pub(crate) fn complement(key: &[usize], dim: usize) -> Vec<usize> {
    (0..dim).filter(|a| !key.contains(a)).collect()
}

// ---------------------------------------------------------------------------
// the field type
// ---------------------------------------------------------------------------

/// A matrix-valued p-form sampled at mesh nodes.
#[derive(Debug, Clone)]
pub struct FormField<R: Real> {
    mesh: Mesh<R>,
    degree: usize,
    n: usize,
    combos: Vec<Vec<usize>>,
    data: Vec<C<R>>,
}

impl<R: Real> FormField<R> {
    /// The zero p-form with n×n values.
    pub fn zero(mesh: &Mesh<R>, degree: usize, n: usize) -> Result<Self> {
        if degree > mesh.dim() {
            return Err(Error::DegreeOutOfRange {
                degree,
                dim: mesh.dim(),
            });
        }
        assert!(n >= 1, "matrix rank must be positive");
        let combos = index_combos(mesh.dim(), degree);
        let len = mesh.num_nodes() * combos.len() * n * n;
        Ok(Self {
            mesh: mesh.clone(),
            degree,
            n,
            combos,
            data: vec![czero(); len],
        })
    }

    /// Sample an su(n)-valued analytic expression: `f(position, combination)`
    /// returns the component value at that node.
    pub fn sample<F>(mesh: &Mesh<R>, degree: usize, n: usize, f: F) -> Result<Self>
    where
        F: Fn(&[R], &[usize]) -> AlgElement<R>,
    {
        let mut field = Self::zero(mesh, degree, n)?;
        let dim = mesh.dim();
        for node in 0..mesh.num_nodes() {
            let coords = mesh.node_coords(node);
            let pos = mesh.position(&coords[..dim]);
            for c in 0..field.combos.len() {
                let v = f(&pos[..dim], &field.combos[c]);
                if v.rank() != n {
                    return Err(Error::RankMismatch(n, v.rank()));
                }
                field.block_mut(node, c).copy_from_slice(v.entries());
            }
        }
        Ok(field)
    }

    /// Sample a general matrix-valued expression (no su(n) validation); the
    /// closure writes the n×n row-major block. For trace-bearing integrands.
    pub fn sample_matrix<F>(mesh: &Mesh<R>, degree: usize, n: usize, f: F) -> Result<Self>
    where
        F: Fn(&[R], &[usize], &mut [C<R>]),
    {
        let mut field = Self::zero(mesh, degree, n)?;
        let dim = mesh.dim();
        let nn = n * n;
        let mut buf = vec![czero(); nn];
        for node in 0..mesh.num_nodes() {
            let coords = mesh.node_coords(node);
            let pos = mesh.position(&coords[..dim]);
            for c in 0..field.combos.len() {
                buf.fill(czero());
                f(&pos[..dim], &field.combos[c], &mut buf);
                field.block_mut(node, c).copy_from_slice(&buf);
            }
        }
        Ok(field)
    }

    pub fn mesh(&self) -> &Mesh<R> {
        &self.mesh
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Matrix rank n of the values.
    pub fn rank(&self) -> usize {
        self.n
    }

    /// Number of index combinations per node, C(dim, p).
    pub fn num_components(&self) -> usize {
        self.combos.len()
    }

    /// The sorted index combinations, in storage order.
    pub fn component_indices(&self) -> &[Vec<usize>] {
        &self.combos
    }

    #[inline]
    fn offset(&self, node: usize, comp: usize) -> usize {
        (node * self.combos.len() + comp) * self.n * self.n
    }

    /// Row-major n×n value block of one component at one node.
    #[inline]
    pub fn block(&self, node: usize, comp: usize) -> &[C<R>] {
        let o = self.offset(node, comp);
        &self.data[o..o + self.n * self.n]
    }

    #[inline]
    pub fn block_mut(&mut self, node: usize, comp: usize) -> &mut [C<R>] {
        let o = self.offset(node, comp);
        let nn = self.n * self.n;
        &mut self.data[o..o + nn]
    }

    /// Validated algebra element at a node (errors on non-su values).
    pub fn component_alg(&self, node: usize, comp: usize) -> Result<AlgElement<R>> {
        AlgElement::new(self.n, self.block(node, comp).to_vec())
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.mesh != other.mesh {
            return Err(Error::MeshMismatch(
                "operands live on different meshes".into(),
            ));
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        if self.n != other.n {
            return Err(Error::RankMismatch(self.n, other.n));
        }
        Ok(())
    }

    fn same_base(&self, other: &Self) -> Result<()> {
        if self.mesh != other.mesh {
            return Err(Error::MeshMismatch(
                "operands live on different meshes".into(),
            ));
        }
        if self.n != other.n {
            return Err(Error::RankMismatch(self.n, other.n));
        }
        Ok(())
    }

    // -- arithmetic ---------------------------------------------------------

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (o, v) in out.data.iter_mut().zip(&other.data) {
            *o += *v;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (o, v) in out.data.iter_mut().zip(&other.data) {
            *o -= *v;
        }
        Ok(out)
    }

    /// self += s · other
    pub fn axpy(&mut self, s: R, other: &Self) -> Result<()> {
        self.same_shape(other)?;
        for (o, v) in self.data.iter_mut().zip(&other.data) {
            *o += v.scale(s);
        }
        Ok(())
    }

    pub fn scaled(&self, s: R) -> Self {
        let mut out = self.clone();
        for v in &mut out.data {
            *v = v.scale(s);
        }
        out
    }

    pub fn scaled_complex(&self, s: C<R>) -> Self {
        let mut out = self.clone();
        for v in &mut out.data {
            *v *= s;
        }
        out
    }

    // -- integrals and norms --------------------------------------------------

    /// ∫ tr(ω) over the mesh (top degree only): node traces times cell
    /// volume, trapezoid-weighted on the interval axis.
    pub fn integrate_trace(&self) -> Result<C<R>> {
        let dim = self.mesh.dim();
        if self.degree != dim {
            return Err(Error::DegreeOutOfRange {
                degree: self.degree,
                dim,
            });
        }
        let total = k::reduce_indexed(self.mesh.num_nodes(), |node| {
            let coords = self.mesh.node_coords(node);
            let w = self.mesh.node_weight(&coords[..dim]);
            k::trace(self.block(node, 0), self.n).scale(w)
        });
        Ok(total.scale(self.mesh.cell_volume()))
    }

    /// L² pairing −∫ tr(α ∧ ⋆β); real and positive definite on su(n)-valued
    /// fields, bilinear (not conjugated) in general.
    pub fn l2_inner(&self, other: &Self) -> Result<C<R>> {
        self.same_shape(other)?;
        let dim = self.mesh.dim();
        let nc = self.combos.len();
        let total = k::reduce_indexed(self.mesh.num_nodes(), |node| {
            let coords = self.mesh.node_coords(node);
            let w = self.mesh.node_weight(&coords[..dim]);
            let mut s = czero::<R>();
            for c in 0..nc {
                s -= k::trace_of_product(self.block(node, c), other.block(node, c), self.n);
            }
            s.scale(w)
        });
        Ok(total.scale(self.mesh.cell_volume()))
    }

    /// Frobenius L² norm: √(∫ Σ_K ‖ω_K‖²_F). Agrees with √l2_inner(ω,ω) on
    /// su(n)-valued fields and stays a norm on general matrix values.
    pub fn norm_l2(&self) -> R {
        let dim = self.mesh.dim();
        let nc = self.combos.len();
        let total = k::reduce_indexed(self.mesh.num_nodes(), |node| {
            let coords = self.mesh.node_coords(node);
            let w = self.mesh.node_weight(&coords[..dim]);
            let mut s = R::zero();
            for c in 0..nc {
                s += k::frob_norm_sq(self.block(node, c));
            }
            C::new(s * w, R::zero())
        });
        (total.re * self.mesh.cell_volume()).max(R::zero()).sqrt()
    }

    /// Largest Frobenius norm over all node blocks.
    pub fn norm_linf(&self) -> R {
        let nc = self.combos.len();
        let mut m = R::zero();
        for node in 0..self.mesh.num_nodes() {
            for c in 0..nc {
                m = m.max(k::frob_norm_sq(self.block(node, c)).sqrt());
            }
        }
        m
    }

    // -- exterior calculus ----------------------------------------------------

    /// Exterior derivative, (dω)_K = Σ_j (−1)^j ∂_{k_j} ω_{K∖k_j}.
    pub fn exterior_d(&self) -> Result<Self> {
        let dim = self.mesh.dim();
        if self.degree >= dim {
            return Err(Error::DegreeOutOfRange {
                degree: self.degree + 1,
                dim,
            });
        }
        let mut out = Self::zero(&self.mesh, self.degree + 1, self.n)?;
        let out_combos = out.combos.clone();
        for (oc, key) in out_combos.iter().enumerate() {
            for (j, &axis) in key.iter().enumerate() {
                let mut sub = key.clone();
                sub.remove(j);
                let ic = comb_rank(&self.combos, &sub);
                let sign = if j % 2 == 0 { R::one() } else { -R::one() };
                accumulate_axis_derivative(
                    &self.mesh,
                    self.n,
                    &self.data,
                    self.combos.len(),
                    ic,
                    &mut out.data,
                    out_combos.len(),
                    oc,
                    axis,
                    sign,
                );
            }
        }
        Ok(out)
    }

    /// Raw storage access for same-crate operators and serialization.
    pub(crate) fn data(&self) -> &[C<R>] {
        &self.data
    }

    pub(crate) fn data_mut(&mut self) -> &mut [C<R>] {
        &mut self.data
    }

    /// self += scale · (a ∧ b) without materializing the wedge.
    pub(crate) fn wedge_accumulate(&mut self, a: &Self, b: &Self, scale: R) -> Result<()> {
        a.same_base(b)?;
        a.same_base(self)?;
        if self.degree != a.degree + b.degree {
            return Err(Error::DegreeMismatch(self.degree, a.degree + b.degree));
        }
        let mut table: Vec<(usize, usize, usize, R)> = Vec::new();
        for (oc, key) in self.combos.iter().enumerate() {
            for positions in index_combos(key.len(), a.degree) {
                let i: Vec<usize> = positions.iter().map(|&t| key[t]).collect();
                let j: Vec<usize> = key.iter().copied().filter(|x| !i.contains(x)).collect();
                let sign = merge_sign(&i, &j).expect("disjoint split");
                table.push((
                    oc,
                    comb_rank(&a.combos, &i),
                    comb_rank(&b.combos, &j),
                    scale * R::of(sign as f64),
                ));
            }
        }
        let n = self.n;
        let nn = n * n;
        let (nca, ncb, nco) = (a.combos.len(), b.combos.len(), self.combos.len());
        for node in 0..self.mesh.num_nodes() {
            for &(oc, ia, ib, sign) in &table {
                let ob = (node * nco + oc) * nn;
                let ab = (node * nca + ia) * nn;
                let bb = (node * ncb + ib) * nn;
                k::mul_acc(
                    &mut self.data[ob..ob + nn],
                    C::new(sign, R::zero()),
                    &a.data[ab..ab + nn],
                    &b.data[bb..bb + nn],
                    n,
                );
            }
        }
        Ok(())
    }

    /// Project every block onto su(n) in place; returns the largest removed
    /// (Hermitian-part, trace-part) defects over all blocks.
    pub(crate) fn project_su_blocks(&mut self) -> (R, R) {
        let nn = self.n * self.n;
        let n = self.n;
        let mut herm = R::zero();
        let mut tr = R::zero();
        for block in self.data.chunks_exact_mut(nn) {
            let (h, t) = k::project_su_split(block, n);
            herm = herm.max(h);
            tr = tr.max(t);
        }
        (herm, tr)
    }

    /// Wedge product: (α∧β)_K = Σ_{I⊔J=K} sign(I,J) α_I β_J with matrix
    /// products as coefficients.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.same_base(other)?;
        let dim = self.mesh.dim();
        let pq = self.degree + other.degree;
        if pq > dim {
            return Err(Error::DegreeOutOfRange { degree: pq, dim });
        }
        let mut out = Self::zero(&self.mesh, pq, self.n)?;
        // one table entry per (output comp, split): (out, in_a, in_b, sign)
        let mut table: Vec<(usize, usize, usize, R)> = Vec::new();
        for (oc, key) in out.combos.iter().enumerate() {
            for positions in index_combos(key.len(), self.degree) {
                let i: Vec<usize> = positions.iter().map(|&t| key[t]).collect();
                let j: Vec<usize> = key.iter().copied().filter(|a| !i.contains(a)).collect();
                let sign = merge_sign(&i, &j).expect("disjoint split");
                table.push((
                    oc,
                    comb_rank(&self.combos, &i),
                    comb_rank(&other.combos, &j),
                    R::of(sign as f64),
                ));
            }
        }
        let n = self.n;
        let nn = n * n;
        let (nca, ncb, nco) = (self.combos.len(), other.combos.len(), out.combos.len());
        for node in 0..self.mesh.num_nodes() {
            for &(oc, ia, ib, sign) in &table {
                let ob = (node * nco + oc) * nn;
                let ab = (node * nca + ia) * nn;
                let bb = (node * ncb + ib) * nn;
                k::mul_acc(
                    &mut out.data[ob..ob + nn],
                    C::new(sign, R::zero()),
                    &self.data[ab..ab + nn],
                    &other.data[bb..bb + nn],
                    n,
                );
            }
        }
        Ok(out)
    }

    /// Hodge star: signed index complement (arc-length coordinates, flat
    /// metric), (⋆ω)_{K^c} = sign(K, K^c) ω_K.
    pub fn hodge_star(&self) -> Self {
        let dim = self.mesh.dim();
        let mut out =
            Self::zero(&self.mesh, dim - self.degree, self.n).expect("complement degree valid");
        let map: Vec<(usize, R)> = self
            .combos
            .iter()
            .map(|key| {
                let comp = complement(key, dim);
                let sign = merge_sign(key, &comp).expect("complement is disjoint");
                (comb_rank(&out.combos, &comp), R::of(sign as f64))
            })
            .collect();
        let nn = self.n * self.n;
        let (nci, nco) = (self.combos.len(), out.combos.len());
        for node in 0..self.mesh.num_nodes() {
            for (ic, &(oc, sign)) in map.iter().enumerate() {
                let ib = (node * nci + ic) * nn;
                let ob = (node * nco + oc) * nn;
                for e in 0..nn {
                    out.data[ob + e] = self.data[ib + e].scale(sign);
                }
            }
        }
        out
    }

    /// Codifferential δ = (−1)^{d(p+1)+1} ⋆d⋆, the L²-adjoint of d on closed
    /// meshes (exactly, by summation by parts) and up to boundary terms on
    /// cylinders.
    pub fn codifferential(&self) -> Result<Self> {
        if self.degree == 0 {
            return Err(Error::DegreeOutOfRange {
                degree: 0,
                dim: self.mesh.dim(),
            });
        }
        let d = self.mesh.dim();
        let p = self.degree;
        let sign = if (d * (p + 1) + 1) % 2 == 0 {
            R::one()
        } else {
            -R::one()
        };
        Ok(self
            .hodge_star()
            .exterior_d()?
            .hodge_star()
            .scaled(sign))
    }

    /// Tangential restriction to the interval-axis boundary with Stokes
    /// orientation signs (−1 at t=0, +1 at t=1). Empty on closed meshes.
    pub fn boundary_restrict(&self) -> Result<OrientedBoundary<R>> {
        let Some(t_axis) = self.mesh.interval_axis() else {
            return Ok(OrientedBoundary { pieces: Vec::new() });
        };
        let dim = self.mesh.dim();
        if self.degree >= dim {
            // a top-degree form has no tangential components on a slice
            return Err(Error::DegreeOutOfRange {
                degree: self.degree,
                dim: dim - 1,
            });
        }
        let slice_mesh = self.mesh.drop_axis(t_axis);
        // tangential combos: no t index; slice indices shift down above t
        let mut tangential: Vec<(usize, usize)> = Vec::new(); // (full comp, slice comp)
        let slice_combos = index_combos(dim - 1, self.degree);
        for (ic, key) in self.combos.iter().enumerate() {
            if key.contains(&t_axis) {
                continue;
            }
            let mapped: Vec<usize> = key
                .iter()
                .map(|&a| if a > t_axis { a - 1 } else { a })
                .collect();
            tangential.push((ic, comb_rank(&slice_combos, &mapped)));
        }
        let ends = [(0usize, -1i32), (self.mesh.node_count(t_axis) - 1, 1i32)];
        let nn = self.n * self.n;
        let mut pieces = Vec::with_capacity(2);
        for (t_coord, sign) in ends {
            let mut field = Self::zero(&slice_mesh, self.degree, self.n)?;
            for snode in 0..slice_mesh.num_nodes() {
                let sc = slice_mesh.node_coords(snode);
                let mut full = [0usize; MAX_DIM];
                for a in 0..dim - 1 {
                    let fa = if a >= t_axis { a + 1 } else { a };
                    full[fa] = sc[a];
                }
                full[t_axis] = t_coord;
                let fnode = self.mesh.node_index(&full[..dim]);
                for &(ic, oc) in &tangential {
                    let src = self.offset(fnode, ic);
                    let dst = field.offset(snode, oc);
                    field.data[dst..dst + nn].copy_from_slice(&self.data[src..src + nn]);
                }
            }
            pieces.push(BoundaryPiece { sign, field });
        }
        Ok(OrientedBoundary { pieces })
    }
}

/// Boundary slice with its Stokes orientation sign.
#[derive(Debug, Clone)]
pub struct BoundaryPiece<R: Real> {
    pub sign: i32,
    pub field: FormField<R>,
}

/// Oriented boundary of a cylinder mesh: the t=0 slice (sign −1) and the
/// t=1 slice (sign +1). Closed meshes have no pieces.
#[derive(Debug, Clone)]
pub struct OrientedBoundary<R: Real> {
    pub pieces: Vec<BoundaryPiece<R>>,
}

// ---------------------------------------------------------------------------
// fused trace integrals
// ---------------------------------------------------------------------------

/// ∫ tr(α ∧ β) with p+q = dim, computed without materializing the wedge.
pub fn integral_wedge_trace<R: Real>(a: &FormField<R>, b: &FormField<R>) -> Result<C<R>> {
    if a.mesh != b.mesh {
        return Err(Error::MeshMismatch("operands live on different meshes".into()));
    }
    if a.n != b.n {
        return Err(Error::RankMismatch(a.n, b.n));
    }
    let dim = a.mesh.dim();
    if a.degree + b.degree != dim {
        return Err(Error::DegreeOutOfRange {
            degree: a.degree + b.degree,
            dim,
        });
    }
    let mut table: Vec<(usize, usize, R)> = Vec::new();
    for (ia, key) in a.combos.iter().enumerate() {
        let comp = complement(key, dim);
        let sign = merge_sign(key, &comp).expect("complement disjoint");
        table.push((ia, comb_rank(&b.combos, &comp), R::of(sign as f64)));
    }
    let n = a.n;
    let total = k::reduce_indexed(a.mesh.num_nodes(), |node| {
        let coords = a.mesh.node_coords(node);
        let w = a.mesh.node_weight(&coords[..dim]);
        let mut s = czero::<R>();
        for &(ia, ib, sign) in &table {
            s += k::trace_of_product(a.block(node, ia), b.block(node, ib), n).scale(sign);
        }
        s.scale(w)
    });
    Ok(total.scale(a.mesh.cell_volume()))
}

/// ∫ tr(α ∧ β ∧ γ) with p+q+r = dim, fused like [`integral_wedge_trace`].
pub fn integral_wedge_trace3<R: Real>(
    a: &FormField<R>,
    b: &FormField<R>,
    c: &FormField<R>,
) -> Result<C<R>> {
    if a.mesh != b.mesh || a.mesh != c.mesh {
        return Err(Error::MeshMismatch("operands live on different meshes".into()));
    }
    if a.n != b.n || a.n != c.n {
        return Err(Error::RankMismatch(a.n, b.n.max(c.n)));
    }
    let dim = a.mesh.dim();
    if a.degree + b.degree + c.degree != dim {
        return Err(Error::DegreeOutOfRange {
            degree: a.degree + b.degree + c.degree,
            dim,
        });
    }
    let mut table: Vec<(usize, usize, usize, R)> = Vec::new();
    for (ia, i) in a.combos.iter().enumerate() {
        let rest = complement(i, dim);
        let sign_i = merge_sign(i, &rest).expect("disjoint");
        for positions in index_combos(rest.len(), b.degree) {
            let j: Vec<usize> = positions.iter().map(|&t| rest[t]).collect();
            let l: Vec<usize> = rest.iter().copied().filter(|x| !j.contains(x)).collect();
            let sign_jl = merge_sign(&j, &l).expect("disjoint");
            table.push((
                ia,
                comb_rank(&b.combos, &j),
                comb_rank(&c.combos, &l),
                R::of((sign_i * sign_jl) as f64),
            ));
        }
    }
    let n = a.n;
    let total = k::reduce_indexed(a.mesh.num_nodes(), |node| {
        let coords = a.mesh.node_coords(node);
        let w = a.mesh.node_weight(&coords[..dim]);
        let mut s = czero::<R>();
        for &(ia, ib, ic, sign) in &table {
            s += k::trace_of_triple(
                a.block(node, ia),
                b.block(node, ib),
                c.block(node, ic),
                n,
            )
            .scale(sign);
        }
        s.scale(w)
    });
    Ok(total.scale(a.mesh.cell_volume()))
}

// ---------------------------------------------------------------------------
// test-field family
// ---------------------------------------------------------------------------

/// Deterministic smooth pseudo-random p-form: per component, two products of
/// per-axis low-frequency waves (≤ 2 modes, amplitude ½) with random su(n)
/// coefficients. Periodic axes use full waves, an interval axis half waves,
/// so values are smooth but generic (no special symmetry, nonzero at ends).
pub fn fourier_test_form<R: Real>(
    mesh: &Mesh<R>,
    degree: usize,
    n: usize,
    seed: u64,
) -> Result<FormField<R>> {
    use rand::Rng;
    let dim = mesh.dim();
    let combos = index_combos(dim, degree);
    let mut rng = crate::lie::seeded_rng(seed);
    struct Term<R: Real> {
        coeff: AlgElement<R>,
        modes: Vec<f64>,
        phases: Vec<f64>,
    }
    let mut terms: Vec<Vec<Term<R>>> = Vec::with_capacity(combos.len());
    for _ in 0..combos.len() {
        let mut per_comp = Vec::with_capacity(2);
        for t in 0..2u32 {
            let coeff = &AlgElement::random(n, &mut rng) * R::of(0.25);
            // Fixed modes (term 0 ↦ 1, term 1 ↦ 2 on every axis) keep the
            // mode lattice resonant: pair products share modes and triples hit
            // 1+1−2 = 0, so trace pairings of independent draws stay O(1)
            // instead of collapsing to exact quadrature zeros.
            let modes = (0..dim).map(|_| (t + 1) as f64).collect();
            let phases = (0..dim)
                .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
                .collect();
            per_comp.push(Term {
                coeff,
                modes,
                phases,
            });
        }
        terms.push(per_comp);
    }
    let topo = mesh.topology().to_vec();
    let extents: Vec<f64> = mesh.extents().iter().map(|e| e.as_f64()).collect();
    FormField::sample(mesh, degree, n, move |pos, key| {
        let rank = combos
            .iter()
            .position(|c| c.as_slice() == key)
            .expect("combo");
        let mut acc = AlgElement::zero(n);
        for t in &terms[rank] {
            let mut profile = 1.0f64;
            for a in 0..pos.len() {
                let x = pos[a].as_f64() / extents[a];
                let angle = match topo[a] {
                    Topology::Periodic => std::f64::consts::TAU * t.modes[a] * x,
                    Topology::Interval => std::f64::consts::PI * t.modes[a] * x,
                };
                profile *= (angle + t.phases[a]).cos();
            }
            acc = &acc + &(&t.coeff * R::of(profile));
        }
        acc
    })
}

/// Deterministic smooth pseudo-random p-form whose per-axis factors carry a
/// DC offset plus one unit-frequency harmonic: offset + cos(2πx + φ) on
/// periodic axes (half frequency on an interval axis).
///
/// Complements [`fourier_test_form`]: that fixture's fixed nonzero modes can
/// make trace pairings against structured low-mode fields collapse to exact
/// quadrature zeros (any constant axis factor forces diagonal term pairing,
/// whose even product modes miss odd factors). The offsets here keep a
/// nonzero mean on every axis, so products against any field with per-axis
/// modes ≤ 1 stay resonant. Derivative content is mild (single frequency),
/// which also keeps pure-gauge data built from these inside O(h²) flatness
/// thresholds on coarse meshes.
pub fn broadband_test_form<R: Real>(
    mesh: &Mesh<R>,
    degree: usize,
    n: usize,
    seed: u64,
) -> Result<FormField<R>> {
    use rand::Rng;
    let dim = mesh.dim();
    let combos = index_combos(dim, degree);
    let mut rng = crate::lie::seeded_rng(seed);
    struct Term<R: Real> {
        coeff: AlgElement<R>,
        offsets: Vec<f64>,
        phases: Vec<f64>,
    }
    let mut terms: Vec<Vec<Term<R>>> = Vec::with_capacity(combos.len());
    for _ in 0..combos.len() {
        let mut per_comp = Vec::with_capacity(2);
        for _ in 0..2 {
            per_comp.push(Term {
                coeff: &AlgElement::random(n, &mut rng) * R::of(0.25),
                offsets: (0..dim).map(|_| rng.gen_range(0.5..1.0)).collect(),
                phases: (0..dim)
                    .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
                    .collect(),
            });
        }
        terms.push(per_comp);
    }
    let topo = mesh.topology().to_vec();
    let extents: Vec<f64> = mesh.extents().iter().map(|e| e.as_f64()).collect();
    FormField::sample(mesh, degree, n, move |pos, key| {
        let rank = combos
            .iter()
            .position(|c| c.as_slice() == key)
            .expect("combo");
        let mut acc = AlgElement::zero(n);
        for t in &terms[rank] {
            let mut profile = 1.0f64;
            for a in 0..pos.len() {
                let x = pos[a].as_f64() / extents[a];
                let angle = match topo[a] {
                    Topology::Periodic => std::f64::consts::TAU * x,
                    Topology::Interval => std::f64::consts::PI * x,
                };
                profile *= t.offsets[a] + (angle + t.phases[a]).cos();
            }
            acc = &acc + &(&t.coeff * R::of(profile));
        }
        acc
    })
}

/// Deterministic smooth su(n)-valued 0-form confined to the diagonal
/// subalgebra, with strictly single-frequency axis content: every term is a
/// product of at most two factors cos(2πx + φ) on distinct axes (half
/// frequency on interval axes), amplitude ≈ 0.03.
///
/// All values commute pointwise, so gauge maps built by exponentiating such a
/// field form an abelian family: the induced pure-gauge connections keep the
/// same single-frequency content (no harmonic ladder from noncommuting
/// exponentials) and their discrete curvature sits far inside O(h²) flatness
/// thresholds even on coarse meshes. That makes this the fixture of choice
/// for refinement studies of quantities that vanish on flat connections,
/// where higher-order contamination would otherwise flatten observed rates.
pub fn diagonal_test_form<R: Real>(mesh: &Mesh<R>, n: usize, seed: u64) -> Result<FormField<R>> {
    use rand::Rng;
    let dim = mesh.dim();
    let mut rng = crate::lie::seeded_rng(seed);
    // generators i(E_kk − E_{k+1,k+1}) spanning the diagonal subalgebra
    let mut gens = Vec::new();
    for g in 1..n {
        let mut m = vec![czero::<R>(); n * n];
        m[(g - 1) * n + (g - 1)] = C::new(R::zero(), R::one());
        m[g * n + g] = C::new(R::zero(), -R::one());
        gens.push(AlgElement::new(n, m)?);
    }
    struct Term {
        gen: usize,
        amp: f64,
        axes: Vec<usize>,
        phases: Vec<f64>,
    }
    let mut terms = Vec::new();
    for g in 0..gens.len() {
        for _ in 0..2 {
            let a0 = rng.gen_range(0..dim);
            let a1 = rng.gen_range(0..dim);
            let axes: Vec<usize> = if a1 == a0 { vec![a0] } else { vec![a0, a1] };
            let phases = (0..axes.len())
                .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
                .collect();
            terms.push(Term {
                gen: g,
                amp: rng.gen_range(0.02..0.04),
                axes,
                phases,
            });
        }
    }
    let topo = mesh.topology().to_vec();
    let extents: Vec<f64> = mesh.extents().iter().map(|e| e.as_f64()).collect();
    FormField::sample(mesh, 0, n, move |pos, _| {
        let mut acc = AlgElement::zero(n);
        for t in &terms {
            let mut profile = t.amp;
            for (j, &a) in t.axes.iter().enumerate() {
                let x = pos[a].as_f64() / extents[a];
                let angle = match topo[a] {
                    Topology::Periodic => std::f64::consts::TAU * x,
                    Topology::Interval => std::f64::consts::PI * x,
                };
                profile *= (angle + t.phases[j]).cos();
            }
            acc = &acc + &(&gens[t.gen] * R::of(profile));
        }
        acc
    })
}

// ---------------------------------------------------------------------------
// stencils
// ---------------------------------------------------------------------------

/// dst[comp_out] += sign · ∂_axis src[comp_in], second order everywhere.
#[allow(clippy::too_many_arguments)]
fn accumulate_axis_derivative<R: Real>(
    mesh: &Mesh<R>,
    n: usize,
    src: &[C<R>],
    src_comps: usize,
    src_comp: usize,
    dst: &mut [C<R>],
    dst_comps: usize,
    dst_comp: usize,
    axis: usize,
    sign: R,
) {
    let nn = n * n;
    let h = mesh.spacing(axis);
    let c = sign / (R::of(2.0) * h);
    let stride = mesh.stride(axis);
    let m = mesh.node_count(axis);
    let periodic = mesh.topology()[axis] == Topology::Periodic;
    let three = R::of(3.0);
    let four = R::of(4.0);
    let sb = |node: usize| (node * src_comps + src_comp) * nn;
    let db = |node: usize| (node * dst_comps + dst_comp) * nn;
    for start in mesh.line_starts(axis) {
        let node = |kk: usize| start + kk * stride;
        if periodic {
            for kk in 0..m {
                let o = db(node(kk));
                let ip = sb(node((kk + 1) % m));
                let im = sb(node((kk + m - 1) % m));
                for e in 0..nn {
                    dst[o + e] += (src[ip + e] - src[im + e]).scale(c);
                }
            }
        } else {
            // left end: (−3f₀ + 4f₁ − f₂) / 2h
            let (o, i0, i1, i2) = (db(node(0)), sb(node(0)), sb(node(1)), sb(node(2)));
            for e in 0..nn {
                dst[o + e] +=
                    (src[i1 + e].scale(four) - src[i0 + e].scale(three) - src[i2 + e]).scale(c);
            }
            for kk in 1..m - 1 {
                let o = db(node(kk));
                let ip = sb(node(kk + 1));
                let im = sb(node(kk - 1));
                for e in 0..nn {
                    dst[o + e] += (src[ip + e] - src[im + e]).scale(c);
                }
            }
            // right end: (3f_{m−1} − 4f_{m−2} + f_{m−3}) / 2h
            let (o, i0, i1, i2) = (
                db(node(m - 1)),
                sb(node(m - 1)),
                sb(node(m - 2)),
                sb(node(m - 3)),
            );
            for e in 0..nn {
                dst[o + e] +=
                    (src[i0 + e].scale(three) - src[i1 + e].scale(four) + src[i2 + e]).scale(c);
            }
        }
    }
}
