use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum DTerm<C> {
    Var(String),
    Const(C),
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct DAtom<C> {
    pub pred: String,
    pub args: Vec<DTerm<C>>,
}

impl<C> DAtom<C> {
    pub fn new(pred: impl Into<String>, args: Vec<DTerm<C>>) -> Self {
        DAtom { pred: pred.into(), args }
    }

    pub fn nullary(pred: impl Into<String>) -> Self {
        DAtom { pred: pred.into(), args: vec![] }
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.args.iter().filter_map(|t| match t {
            DTerm::Var(x) => Some(x.as_str()),
            DTerm::Const(_) => None,
        })
    }
}

/// `head :- pos₁, …, posₙ, not neg₁, …, not negₘ.`
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Rule<C> {
    pub head: DAtom<C>,
    pub pos: Vec<DAtom<C>>,
    pub neg: Vec<DAtom<C>>,
}

impl<C> Rule<C> {
    pub fn positive(head: DAtom<C>, pos: Vec<DAtom<C>>) -> Self {
        Rule { head, pos, neg: vec![] }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GroundAtom<C> {
    pub pred: String,
    pub args: Vec<C>,
}

impl<C: fmt::Display> fmt::Display for GroundAtom<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args: Vec<String> = self.args.iter().map(ToString::to_string).collect();
        write!(f, "{}({})", self.pred, args.join(","))
    }
}

/// Function-free Horn rules with stratified negation, plus ground facts.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Program<C> {
    pub facts: BTreeSet<GroundAtom<C>>,
    pub rules: Vec<Rule<C>>,
}

impl<C> Default for Program<C> {
    fn default() -> Self {
        Program { facts: BTreeSet::new(), rules: vec![] }
    }
}

impl<C: Ord> Program<C> {
    pub fn predicates(&self) -> BTreeSet<&str> {
        let mut out: BTreeSet<&str> = self.facts.iter().map(|f| f.pred.as_str()).collect();
        for r in &self.rules {
            out.insert(&r.head.pred);
            out.extend(r.pos.iter().chain(&r.neg).map(|a| a.pred.as_str()));
        }
        out
    }

    pub fn has_negation(&self) -> bool {
        self.rules.iter().any(|r| !r.neg.is_empty())
    }
}
