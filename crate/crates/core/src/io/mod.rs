//! Instance documents and exports.
