//! Certificate verifiers, brute-force oracles, and fixed-embedding
//! feasibility solvers for the five problems in the chain.

pub mod angles;
pub mod brute;
pub mod maxflow;
pub mod oracles;
pub mod solvers;

pub use angles::{check_rect_assignment, check_upward_assignment, AngleError};
pub use brute::{
    enumerate_rect_assignments, enumerate_upward_assignments, planar_rotation_systems,
    solve_rect_bruteforce, solve_upward_bruteforce,
};
pub use oracles::{
    solve_aonf_bruteforce, solve_co_bruteforce, solve_mcc_bruteforce, verify_aonf_flow,
    verify_circulating, OracleError,
};
pub use solvers::{solve_rect_fixed_embedding, solve_upward_fixed_embedding};
