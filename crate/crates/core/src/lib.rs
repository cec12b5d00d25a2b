//! Heaviest H-subgraph search in real weighted graphs.
//!
//! The crate is organised bottom-up: [`extmat`] holds the dense semiring
//! kernels, [`dominance`] and [`witness`] build the matrix machinery on top
//! of them, and [`vertexmax`], [`edgemax`], [`chromatic`] and [`market`]
//! solve the search problems. [`oracle`] holds brute-force references for
//! every search problem.
//!
//! ```
//! use hsub::graph::parse_graph;
//! use hsub::vertexmax::heaviest_triangle_det;
//!
//! let g = parse_graph("g 3\nvw 1 1\nvw 2 2\nvw 3 3\ne 1 2\ne 2 3\ne 1 3\n").unwrap();
//! let t = heaviest_triangle_det(&g).unwrap().unwrap();
//! assert_eq!(t.vertices, vec![1, 2, 3]);
//! assert_eq!(t.weight, 6.0);
//! ```

pub mod chromatic;
pub mod dominance;
pub mod edgemax;
pub mod error;
pub mod extmat;
pub mod graph;
pub mod market;
pub mod oracle;
pub mod vertexmax;
pub mod witness;

pub use error::{Error, ParseError, ParseErrorKind, Result};
pub use extmat::{BoolMatrix, CountMatrix, ExtMatrix};
pub use graph::{parse_graph, serialize_graph, Graph, SubgraphKind, SubgraphResult, VertexColoring};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/matrices.md")]
    mod matrices {}
    #[doc = include_str!("../../../book/src/dominance.md")]
    mod dominance {}
    #[doc = include_str!("../../../book/src/witnesses.md")]
    mod witnesses {}
    #[doc = include_str!("../../../book/src/vertex_weighted.md")]
    mod vertex_weighted {}
    #[doc = include_str!("../../../book/src/edge_weighted.md")]
    mod edge_weighted {}
    #[doc = include_str!("../../../book/src/chromatic.md")]
    mod chromatic {}
    #[doc = include_str!("../../../book/src/market.md")]
    mod market {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
