use std::fmt;
use std::ops::Not;

/// A reference to an AIG node plus a complement flag.
///
/// Packed as `2 * node + complement`, the same encoding AIGER uses, so
/// ordering literals orders them by node index first.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal(u32);

impl Literal {
    /// The constant-false node, uncomplemented.
    pub const FALSE: Literal = Literal(0);
    /// The constant-false node, complemented.
    pub const TRUE: Literal = Literal(1);

    pub fn new(node: usize, complemented: bool) -> Self {
        Literal((node as u32) << 1 | complemented as u32)
    }

    pub fn positive(node: usize) -> Self {
        Literal::new(node, false)
    }

    pub fn node(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_complemented(self) -> bool {
        self.0 & 1 != 0
    }

    pub fn complement_if(self, c: bool) -> Self {
        Literal(self.0 ^ c as u32)
    }

    pub fn is_constant(self) -> bool {
        self.node() == 0
    }

    /// Raw `2v + c` encoding used by the AIGER format.
    pub fn encoded(self) -> u32 {
        self.0
    }

    pub fn from_encoded(raw: u32) -> Self {
        Literal(raw)
    }
}

impl Not for Literal {
    type Output = Literal;

    fn not(self) -> Literal {
        Literal(self.0 ^ 1)
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_complemented() {
            write!(f, "!n{}", self.node())
        } else {
            write!(f, "n{}", self.node())
        }
    }
}
