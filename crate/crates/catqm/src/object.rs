//! Object grammar of the free category: unit, named generators, duals,
//! tensors and biproducts.

use std::fmt;

/// An object of the category. Structural equality is the notion of
/// "same type" everywhere; no normalisation is applied, so `Dual(Dual(A))`
/// and `A` are distinct objects related by an explicit isomorphism term.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ObjectType {
    /// Monoidal unit `I`.
    Unit,
    /// Named generator with an explicit dimension (cardinality in the
    /// relational backend).
    Base(String, usize),
    Dual(Box<ObjectType>),
    Tensor(Box<ObjectType>, Box<ObjectType>),
    Biproduct(Box<ObjectType>, Box<ObjectType>),
}

impl ObjectType {
    pub fn base(name: &str, dim: usize) -> Self {
        ObjectType::Base(name.to_string(), dim)
    }

    pub fn dual(self) -> Self {
        ObjectType::Dual(Box::new(self))
    }

    pub fn tensor(self, other: Self) -> Self {
        ObjectType::Tensor(Box::new(self), Box::new(other))
    }

    pub fn biproduct(self, other: Self) -> Self {
        ObjectType::Biproduct(Box::new(self), Box::new(other))
    }

    /// Dimension of the evaluated object: duals preserve dimension,
    /// tensors multiply, biproducts add.
    pub fn dim(&self) -> usize {
        match self {
            ObjectType::Unit => 1,
            ObjectType::Base(_, d) => *d,
            ObjectType::Dual(a) => a.dim(),
            ObjectType::Tensor(a, b) => a.dim() * b.dim(),
            ObjectType::Biproduct(a, b) => a.dim() + b.dim(),
        }
    }

    /// Right-nested biproduct of the components. Panics on an empty slice;
    /// callers guard arity before building objects.
    pub fn biproduct_of(comps: &[ObjectType]) -> ObjectType {
        assert!(!comps.is_empty(), "biproduct of zero components");
        let mut it = comps.iter().rev();
        let mut acc = it.next().unwrap().clone();
        for c in it {
            acc = c.clone().biproduct(acc);
        }
        acc
    }

    /// Right-nested tensor of the components; the empty tensor is `I`.
    pub fn tensor_of(comps: &[ObjectType]) -> ObjectType {
        match comps.split_last() {
            None => ObjectType::Unit,
            Some((last, rest)) => {
                let mut acc = last.clone();
                for c in rest.iter().rev() {
                    acc = c.clone().tensor(acc);
                }
                acc
            }
        }
    }

    /// Components along the right spine of a biproduct tree: `A (+) (B (+) C)`
    /// yields `[A, B, C]`, anything else yields a singleton.
    pub fn biproduct_components(&self) -> Vec<ObjectType> {
        let mut comps = Vec::new();
        let mut cur = self;
        while let ObjectType::Biproduct(l, r) = cur {
            comps.push((**l).clone());
            cur = r;
        }
        comps.push(cur.clone());
        comps
    }
}

impl fmt::Display for ObjectType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObjectType::Unit => write!(f, "I"),
            ObjectType::Base(name, _) => write!(f, "{name}"),
            ObjectType::Dual(a) => match **a {
                ObjectType::Unit | ObjectType::Base(..) | ObjectType::Dual(..) => {
                    write!(f, "{a}*")
                }
                _ => write!(f, "({a})*"),
            },
            ObjectType::Tensor(a, b) => write!(f, "({a} (x) {b})"),
            ObjectType::Biproduct(a, b) => write!(f, "({a} (+) {b})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_multiply_and_add() {
        let q = ObjectType::base("Q", 2);
        let t = q.clone().tensor(q.clone());
        let s = q.clone().biproduct(q.clone());
        assert_eq!(t.dim(), 4);
        assert_eq!(s.dim(), 4);
        assert_eq!(q.clone().dual().dim(), 2);
        assert_eq!(ObjectType::Unit.dim(), 1);
        assert_eq!(t.tensor(s).dim(), 16);
    }

    #[test]
    fn biproduct_of_nests_to_the_right() {
        let q = ObjectType::base("Q", 2);
        let four = ObjectType::biproduct_of(&[q.clone(), q.clone(), q.clone(), q.clone()]);
        let expected = q
            .clone()
            .biproduct(q.clone().biproduct(q.clone().biproduct(q.clone())));
        assert_eq!(four, expected);
        assert_eq!(four.biproduct_components().len(), 4);
    }

    #[test]
    fn display_is_readable() {
        let q = ObjectType::base("Q", 2);
        let o = q.clone().tensor(q.clone().dual());
        assert_eq!(o.to_string(), "(Q (x) Q*)");
    }
}
