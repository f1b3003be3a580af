//! 16-bit truth tables over up to four variables.
//!
//! Tables of functions with fewer than four support variables are kept in
//! replicated form: the function is duplicated over the unused variables, so
//! every table is a valid 4-variable table and bitwise operators compose.

/// Projection tables: `VAR[i]` is variable `i` itself.
pub const VAR: [u16; 4] = [0xAAAA, 0xCCCC, 0xF0F0, 0xFF00];

/// Negative cofactor, result replicated over `var`.
pub fn cofactor0(t: u16, var: usize) -> u16 {
    let lo = t & !VAR[var];
    lo | lo << (1 << var)
}

/// Positive cofactor, result replicated over `var`.
pub fn cofactor1(t: u16, var: usize) -> u16 {
    let hi = t & VAR[var];
    hi | hi >> (1 << var)
}

pub fn depends_on(t: u16, var: usize) -> bool {
    cofactor0(t, var) != cofactor1(t, var)
}

/// Value of `t` at an assignment given as a bitmask over variables.
pub fn eval(t: u16, assignment: usize) -> bool {
    t >> (assignment & 0xF) & 1 != 0
}

/// Remaps a table whose variables sit at `positions` (ascending) in a larger
/// variable set onto that larger set. `positions[i]` is the new index of the
/// old variable `i`.
pub fn remap(t: u16, positions: &[usize]) -> u16 {
    if positions.iter().enumerate().all(|(i, &p)| i == p) {
        return t;
    }
    let mut out = 0u16;
    for assign in 0..16usize {
        let mut old_assign = 0usize;
        for (i, &p) in positions.iter().enumerate() {
            old_assign |= (assign >> p & 1) << i;
        }
        if eval(t, old_assign) {
            out |= 1 << assign;
        }
    }
    out
}

/// A product term: conjunction of positive literals in `pos` and negated
/// literals in `neg` (bitmasks over variables).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cube {
    pub pos: u8,
    pub neg: u8,
}

impl Cube {
    pub const TAUTOLOGY: Cube = Cube { pos: 0, neg: 0 };

    pub fn table(self) -> u16 {
        let mut t = 0xFFFFu16;
        for (v, &var) in VAR.iter().enumerate() {
            if self.pos >> v & 1 != 0 {
                t &= var;
            }
            if self.neg >> v & 1 != 0 {
                t &= !var;
            }
        }
        t
    }

    pub fn n_literals(self) -> u32 {
        (self.pos | self.neg).count_ones()
    }
}

/// Irredundant sum-of-products by the recursive interval method: returns a
/// cover `C` with `lower <= C <= upper` and its table. Callers pass
/// `lower == upper` for an exact cover.
pub fn isop(lower: u16, upper: u16, n_vars: usize) -> (Vec<Cube>, u16) {
    debug_assert_eq!(lower & !upper, 0, "lower must imply upper");
    if lower == 0 {
        return (Vec::new(), 0);
    }
    if upper == 0xFFFF {
        return (vec![Cube::TAUTOLOGY], 0xFFFF);
    }
    // split on the topmost variable either bound depends on
    let var = (0..n_vars)
        .rev()
        .find(|&v| depends_on(lower, v) || depends_on(upper, v))
        .expect("non-constant function must depend on a variable");
    let (l0, l1) = (cofactor0(lower, var), cofactor1(lower, var));
    let (u0, u1) = (cofactor0(upper, var), cofactor1(upper, var));
    let (c0, f0) = isop(l0 & !u1, u0, var);
    let (c1, f1) = isop(l1 & !u0, u1, var);
    let l_star = (l0 & !f0) | (l1 & !f1);
    let (c2, f2) = isop(l_star, u0 & u1, var);
    let cover = (f0 & !VAR[var]) | (f1 & VAR[var]) | f2;
    let mut cubes = Vec::with_capacity(c0.len() + c1.len() + c2.len());
    for c in c0 {
        cubes.push(Cube {
            pos: c.pos,
            neg: c.neg | 1 << var,
        });
    }
    for c in c1 {
        cubes.push(Cube {
            pos: c.pos | 1 << var,
            neg: c.neg,
        });
    }
    cubes.extend(c2);
    debug_assert_eq!(lower & !cover, 0);
    debug_assert_eq!(cover & !upper, 0);
    (cubes, cover)
}
