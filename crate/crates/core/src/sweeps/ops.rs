/// A binary Boolean operator, defined by its truth table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BooleanOp {
    And,
    Or,
    Xor,
    /// `f ∧ ¬g`
    Diff,
    /// `f → g`
    Imp,
    Nand,
    Nor,
    /// `f ↔ g`
    Xnor,
}

impl BooleanOp {
    pub const ALL: [BooleanOp; 8] = [
        BooleanOp::And,
        BooleanOp::Or,
        BooleanOp::Xor,
        BooleanOp::Diff,
        BooleanOp::Imp,
        BooleanOp::Nand,
        BooleanOp::Nor,
        BooleanOp::Xnor,
    ];

    /// Outputs for the inputs `(0,0), (0,1), (1,0), (1,1)`.
    pub fn truth_table(self) -> [bool; 4] {
        match self {
            BooleanOp::And => [false, false, false, true],
            BooleanOp::Or => [false, true, true, true],
            BooleanOp::Xor => [false, true, true, false],
            BooleanOp::Diff => [false, false, true, false],
            BooleanOp::Imp => [true, true, false, true],
            BooleanOp::Nand => [true, true, true, false],
            BooleanOp::Nor => [true, false, false, false],
            BooleanOp::Xnor => [true, false, false, true],
        }
    }

    pub fn eval(self, a: bool, b: bool) -> bool {
        self.truth_table()[((a as usize) << 1) | b as usize]
    }

    /// The constant result when the left operand is the terminal `a`, if
    /// the right operand does not matter.
    pub fn left_shortcut(self, a: bool) -> Option<bool> {
        let (r0, r1) = (self.eval(a, false), self.eval(a, true));
        (r0 == r1).then_some(r0)
    }

    /// The constant result when the right operand is the terminal `b`, if
    /// the left operand does not matter.
    pub fn right_shortcut(self, b: bool) -> Option<bool> {
        let (r0, r1) = (self.eval(false, b), self.eval(true, b));
        (r0 == r1).then_some(r0)
    }

    pub fn is_commutative(self) -> bool {
        let t = self.truth_table();
        t[1] == t[2]
    }

    /// `x op x == x`
    pub fn is_idempotent(self) -> bool {
        let t = self.truth_table();
        !t[0] && t[3]
    }
}
