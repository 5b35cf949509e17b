use std::fmt;
use std::str::FromStr;

use super::FeedbackGraph;
use crate::error::{Error, Result};

/// Named feedback graphs, generalized to `K` vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CatalogGraph {
    /// Every edge including all self-loops.
    Full,
    /// Self-loops only.
    Bandit,
    /// Every edge between distinct vertices, no self-loops.
    LooplessClique,
    /// Two actions: `1` reveals both losses, `2` reveals nothing.
    AppleTasting,
    /// Vertex 1 has a self-loop and reveals every other vertex.
    RevealingAction,
    /// Full graph minus the self-loop of vertex 1 and the edge `(K, 1)`.
    CliqueMinus,
    /// Revealing-action star plus every self-loop.
    LoopyStar,
}

impl CatalogGraph {
    pub const ALL: [CatalogGraph; 7] = [
        CatalogGraph::Full,
        CatalogGraph::Bandit,
        CatalogGraph::LooplessClique,
        CatalogGraph::AppleTasting,
        CatalogGraph::RevealingAction,
        CatalogGraph::CliqueMinus,
        CatalogGraph::LoopyStar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CatalogGraph::Full => "full",
            CatalogGraph::Bandit => "bandit",
            CatalogGraph::LooplessClique => "loopless_clique",
            CatalogGraph::AppleTasting => "apple_tasting",
            CatalogGraph::RevealingAction => "revealing_action",
            CatalogGraph::CliqueMinus => "clique_minus",
            CatalogGraph::LoopyStar => "loopy_star",
        }
    }

    /// Smallest `K` for which the entry is defined.
    pub fn min_vertices(self) -> usize {
        match self {
            CatalogGraph::AppleTasting => 2,
            CatalogGraph::CliqueMinus => 3,
            _ => 1,
        }
    }
}

impl fmt::Display for CatalogGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CatalogGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('-', "_");
        CatalogGraph::ALL
            .into_iter()
            .find(|c| c.name() == norm)
            .ok_or_else(|| Error::UnknownCatalog(s.to_string()))
    }
}

pub fn catalog(name: CatalogGraph, k: usize) -> Result<FeedbackGraph> {
    if k < name.min_vertices() {
        return Err(Error::invalid(format!(
            "{name} needs at least {} vertices, got {k}",
            name.min_vertices()
        )));
    }
    if name == CatalogGraph::AppleTasting && k != 2 {
        return Err(Error::invalid(format!("apple_tasting has exactly 2 vertices, got {k}")));
    }
    let pairs = (0..k).flat_map(|u| (0..k).map(move |v| (u, v)));
    let edges: Vec<(usize, usize)> = match name {
        CatalogGraph::Full => pairs.collect(),
        CatalogGraph::Bandit => (0..k).map(|i| (i, i)).collect(),
        CatalogGraph::LooplessClique => pairs.filter(|(u, v)| u != v).collect(),
        CatalogGraph::AppleTasting | CatalogGraph::RevealingAction => {
            (0..k).map(|j| (0, j)).collect()
        }
        CatalogGraph::CliqueMinus => pairs.filter(|&e| e != (0, 0) && e != (k - 1, 0)).collect(),
        CatalogGraph::LoopyStar => (0..k).map(|j| (0, j)).chain((1..k).map(|i| (i, i))).collect(),
    };
    FeedbackGraph::from_edges(k, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Observability;

    #[test]
    fn catalog_shapes() {
        let bandit = catalog(CatalogGraph::Bandit, 3).unwrap();
        assert_eq!(bandit.edges().collect::<Vec<_>>(), vec![(0, 0), (1, 1), (2, 2)]);

        let apple = catalog(CatalogGraph::AppleTasting, 2).unwrap();
        assert_eq!(apple.edges().collect::<Vec<_>>(), vec![(0, 0), (0, 1)]);

        let star = catalog(CatalogGraph::LoopyStar, 4).unwrap();
        let mut expected = vec![(0, 0), (0, 1), (0, 2), (0, 3), (1, 1), (2, 2), (3, 3)];
        expected.sort();
        assert_eq!(star.edges().collect::<Vec<_>>(), expected);

        let minus = catalog(CatalogGraph::CliqueMinus, 5).unwrap();
        assert_eq!(minus.num_edges(), 23);
        assert_eq!(minus.in_neighbors(0), &[1, 2, 3]);
    }

    #[test]
    fn catalog_classes() {
        use CatalogGraph::*;
        let expected = [
            (Full, Observability::StronglyObservable),
            (Bandit, Observability::StronglyObservable),
            (LooplessClique, Observability::StronglyObservable),
            (AppleTasting, Observability::StronglyObservable),
            (RevealingAction, Observability::WeaklyObservable),
            (CliqueMinus, Observability::WeaklyObservable),
            (LoopyStar, Observability::StronglyObservable),
        ];
        for (name, class) in expected {
            let k = if name == AppleTasting { 2 } else { 5 };
            assert_eq!(catalog(name, k).unwrap().classify(), class, "{name}");
        }
    }

    #[test]
    fn names_and_bad_sizes() {
        for c in CatalogGraph::ALL {
            assert_eq!(c.name().parse::<CatalogGraph>().unwrap(), c);
        }
        assert_eq!("loopy-star".parse::<CatalogGraph>().unwrap(), CatalogGraph::LoopyStar);
        assert!("petersen".parse::<CatalogGraph>().is_err());
        assert!(catalog(CatalogGraph::AppleTasting, 3).is_err());
        assert!(catalog(CatalogGraph::CliqueMinus, 2).is_err());
        assert!(catalog(CatalogGraph::Full, 0).is_err());
    }
}
