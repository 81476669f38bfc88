//! Geometric substrate: embeddings, faces, duals, connectivity,
//! st-orientations, and embedding-preserving surgery.

pub mod connectivity;
pub mod dual;
pub mod embedding;
pub mod orient;
pub mod surgery;

pub use connectivity::{is_biconnected, is_triconnected};
pub use dual::{dual_graph, Dual};
pub use embedding::{trace_faces, validate_embedding, Corner, Embedding, Face, FaceId, FaceSet};
pub use orient::{st_numbering, st_orientation};
pub use surgery::{eliminate_crossings, subdivide_all, triangulate, Subdivision};
