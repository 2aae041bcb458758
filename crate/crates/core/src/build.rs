//! Engine results that optionally carry their combine tree.

use crate::sumset::{CardSumSet, SumSet};
use crate::witness::{GridNode, Node};

pub(crate) enum Built {
    Plain(SumSet),
    Traced(Node),
}

impl Built {
    pub fn sums(&self) -> &SumSet {
        match self {
            Built::Plain(s) => s,
            Built::Traced(n) => n.sums(),
        }
    }

    pub fn into_sums(self) -> SumSet {
        match self {
            Built::Plain(s) => s,
            Built::Traced(n) => match n {
                Node::Leaf { sums, .. }
                | Node::Combine { sums, .. }
                | Node::Scaled { sums, .. }
                | Node::Lifted { sums, .. }
                | Node::Projected { sums, .. } => sums,
            },
        }
    }

    pub fn into_node(self) -> Node {
        match self {
            Built::Traced(n) => n,
            Built::Plain(_) => panic!("result was built without a trace"),
        }
    }

    pub fn leaf(elements: &[u64], sums: SumSet, record: bool) -> Built {
        if record {
            Built::Traced(Node::Leaf {
                elements: elements.to_vec(),
                sums,
            })
        } else {
            Built::Plain(sums)
        }
    }

    pub fn combine(left: Built, right: Built, sums: SumSet) -> Built {
        match (left, right) {
            (Built::Traced(l), Built::Traced(r)) => Built::Traced(Node::Combine {
                left: Box::new(l),
                right: Box::new(r),
                sums,
            }),
            _ => Built::Plain(sums),
        }
    }

    pub fn scaled(child: Built, multiplier: u64, sums: SumSet) -> Built {
        match child {
            Built::Traced(c) => Built::Traced(Node::Scaled {
                child: Box::new(c),
                multiplier,
                sums,
            }),
            Built::Plain(_) => Built::Plain(sums),
        }
    }

    pub fn lifted(child: Built, pivot: u64, sums: SumSet) -> Built {
        match child {
            Built::Traced(c) => Built::Traced(Node::Lifted {
                child: Box::new(c),
                pivot,
                sums,
            }),
            Built::Plain(_) => Built::Plain(sums),
        }
    }

    pub fn projected(grid: BuiltGrid, sums: SumSet) -> Built {
        match grid {
            BuiltGrid::Traced(g) => Built::Traced(Node::Projected {
                grid: Box::new(g),
                sums,
            }),
            BuiltGrid::Plain(_) => Built::Plain(sums),
        }
    }
}

pub(crate) enum BuiltGrid {
    Plain(CardSumSet),
    Traced(GridNode),
}

impl BuiltGrid {
    pub fn grid(&self) -> &CardSumSet {
        match self {
            BuiltGrid::Plain(g) => g,
            BuiltGrid::Traced(n) => n.grid(),
        }
    }

    pub fn into_grid(self) -> CardSumSet {
        match self {
            BuiltGrid::Plain(g) => g,
            BuiltGrid::Traced(GridNode::Leaf { grid, .. })
            | BuiltGrid::Traced(GridNode::Combine { grid, .. }) => grid,
        }
    }

    pub fn leaf(elements: &[u64], offset: u64, grid: CardSumSet, record: bool) -> BuiltGrid {
        if record {
            BuiltGrid::Traced(GridNode::Leaf {
                elements: elements.to_vec(),
                offset,
                grid,
            })
        } else {
            BuiltGrid::Plain(grid)
        }
    }

    pub fn combine(left: BuiltGrid, right: BuiltGrid, offset: u64, grid: CardSumSet) -> BuiltGrid {
        match (left, right) {
            (BuiltGrid::Traced(l), BuiltGrid::Traced(r)) => BuiltGrid::Traced(GridNode::Combine {
                left: Box::new(l),
                right: Box::new(r),
                offset,
                grid,
            }),
            _ => BuiltGrid::Plain(grid),
        }
    }
}
