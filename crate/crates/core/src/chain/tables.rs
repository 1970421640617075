//! Transition-probability tables stored as formula text.
//!
//! Rows are `q1..q12`; columns are `q1..q12` followed by the aggregate
//! absorbing state `q0`. Variables: `N`, `s`, `r`, `R = (1-r)^2 + r^2`.
//! The tables are transcribed as published; known misprints are listed in
//! [`ERRATA`] and applied on top by the matrix builders.

pub(crate) const GENERAL: [[&str; 13]; 12] = [
    // q1
    [
        "(N-1)*(N-2)*(N-3)/N^3",
        "(N-1)*(N-2)/(2*N^3)",
        "(N-1)*(N-2)/(2*N^3)",
        "2*(N-1)*(N-2)/N^3",
        "(N-1)/(4*N^3)",
        "(N-1)/(2*N^3)",
        "2*(N-1)*(N-2)/N^3",
        "(N-1)/N^3",
        "(N-1)/N^3",
        "(N-1)/N^3",
        "(N-1)/(2*N^3)",
        "1/(4*N^3)",
        "1/N-1/(4*N^2)",
    ],
    // q2
    [
        "(1-s)*(N-2)*(N-3)/N^2",
        "s*(N-1)*(N-2)/(2*N^2)",
        "(1-s)*(N-2)/(2*N^2)",
        "2*(1-s)*(N-2)/N^2",
        "s*(N-1)/(4*N^2)",
        "(1-s)/(2*N^2)",
        "2*(1-s)*(N-2)/N^2",
        "s*(N-1)/N^2",
        "(1-s)/N^2",
        "(1-s)/N^2",
        "(1-s)/(2*N^2)",
        "s/(4*N^2)",
        "s/2+(2-s)/(4*N)",
    ],
    // q3
    [
        "(1-s)*(N-2)*(N-3)/N^2",
        "(1-s)*(N-2)/(2*N^2)",
        "s*(N-1)*(N-2)/(2*N^2)",
        "2*(1-s)*(N-2)/N^2",
        "s*(N-1)/(4*N^2)",
        "(1-s)/(2*N^2)",
        "2*(1-s)*(N-2)/N^2",
        "(1-s)/N^2",
        "s*(N-1)/N^2",
        "(1-s)/(2*N^2)",
        "(1-s)/N^2",
        "s/(4*N^2)",
        "s/2+(2-s)/(4*N)",
    ],
    // q4
    [
        "(1-s)*(N-2)*(N-3)/N^2",
        "(1-s)*(N-2)/(2*N^2)",
        "(1-s)*(N-2)/(2*N^2)",
        "s*(N-1)*(N-2)/(2*N^2)+3*(1-s)*(N-2)/(2*N^2)",
        "(1-s)/(4*N^2)",
        "(1-s)/(4*N^2)+s*(N-1)/(4*N^2)",
        "s*(N-1)*(N-2)/(2*N^2)+3*(1-s)*(N-2)/(2*N^2)",
        "s*(N-1)/(2*N^2)+(1-s)/(2*N^2)",
        "s*(N-1)/(2*N^2)+(1-s)/(2*N^2)",
        "s*(N-1)/(2*N^2)+(1-s)/(2*N^2)",
        "s*(N-1)/(4*N^2)+(1-s)/(4*N^2)",
        "s/(4*N^2)",
        "1/N-1/(4*N^2)",
    ],
    // q5
    [
        "(1-s)^2*(N-2)*(N-3)/(N*(N-1))",
        "s*(1-s)*(N-2)/(2*N)",
        "s*(1-s)*(N-2)/(2*N)",
        "2*(1-s)^2*(N-2)/(N*(N-1))",
        "s^2*(N-1)/(4*N)",
        "(1-s)^2/(2*N*(N-1))",
        "2*(1-s)^2*(N-2)/(N*(N-1))",
        "s*(1-s)/N",
        "s*(1-s)/N",
        "(1-s)^2/(N*(N-1))",
        "(1-s)^2/(2*N*(N-1))",
        "s^2/(4*N)",
        "s-s^2/4",
    ],
    // q6
    [
        "(1-s)^2*(N-2)*(N-3)/(N*(N-1))",
        "(1-s)^2*(N-2)/(2*N*(N-1))",
        "(1-s)^2*(N-2)/(2*N*(N-1))",
        "s*(1-s)*(N-2)/N+(1-s)^2*(N-2)/(N*(N-1))",
        "(1-s)^2/(4*N*(N-1))",
        "(1-s)^2/(4*N*(N-1))+s^2*(N-1)/(4*N)",
        "s*(1-s)*(N-2)/N+(1-s)^2*(N-2)/(N*(N-1))",
        "s*(1-s)/N",
        "s*(1-s)/N",
        "s^2*(N-1)/(2*N)+(1-s)^2/(2*N*(N-1))",
        "s^2*(N-1)/(4*N)+(1-s)^2/(4*N*(N-1))",
        "s^2/(4*N)",
        "1/N-s^2/(4*N)-(1-s)^2/(4*N*(N-1))",
    ],
    // q7
    [
        "0",
        "0",
        "0",
        "r*(N-1)*(N-2)/N^2",
        "0",
        "r/(2*N)*(1-1/N)",
        "(1-r)*(N-1)*(N-2)/N^2",
        "(N-1)/(2*N^2)",
        "(N-1)/(2*N^2)",
        "(N-1)/(2*N^2)",
        "(1-r)*(N-1)/(2*N^2)",
        "1/(4*N^2)",
        "1/N-1/(4*N^2)",
    ],
    // q8
    [
        "0",
        "0",
        "0",
        "r*(1-s)*(N-2)/N",
        "0",
        "r*(1-s)/(2*N)",
        "(1-r)*(1-s)*(N-2)/N",
        "s*(N-1)/(2*N)",
        "(1-s)/(2*N)",
        "(1-s)/(2*N)",
        "(1-r)*(1-s)/(2*N)",
        "s/(4*N)",
        "s/2+(2-s)/(4*N)",
    ],
    // q9
    [
        "0",
        "0",
        "0",
        "r*(1-s)*(N-2)/N",
        "0",
        "r*(1-s)/(2*N)",
        "(1-r)*(1-s)*(N-2)/N",
        "(1-s)/(2*N)",
        "s*(N-1)/(2*N)",
        "(1-s)/(2*N)",
        "(1-r)*(1-s)/(2*N)",
        "s/(4*N)",
        "s/2+(2-s)/(4*N)",
    ],
    // q10
    [
        "0",
        "0",
        "0",
        "r*(1-s)*(N-2)/N",
        "0",
        "r*s*(N-1)/(2*N)",
        "(1-r)*(1-s)*(N-2)/N",
        "(1-s)/(2*N)",
        "(1-s)/(2*N)",
        "s*(N-1)/(2*N)",
        "(1-r)*s*(N-1)/(2*N)",
        "s/(4*N)",
        "(4-s)/(4*N)",
    ],
    // q11
    [
        "0",
        "0",
        "0",
        "0",
        "0",
        "r^2*(N-1)/N",
        "0",
        "0",
        "0",
        "2*r*(1-r)*(N-1)/N",
        "(1-r)^2*(N-1)/N",
        "R/(2*N)",
        "(-2*r^2+2*r+1)/(2*N)",
    ],
    // q12
    [
        "0",
        "0",
        "0",
        "0",
        "0",
        "r^2*(1-s)",
        "0",
        "0",
        "0",
        "2*r*(1-r)*(1-s)",
        "(1-r)^2*(1-s)",
        "R*s/2",
        "s*(-2*r^2+2*r+1)/2",
    ],
];

pub(crate) const TOTAL_SELFING: [[&str; 13]; 12] = [
    // q1
    [
        "(N-1)*(N-2)*(N-3)/N^3",
        "(N-1)*(N-2)/(2*N^3)",
        "(N-1)*(N-2)/(2*N^3)",
        "2*(N-1)*(N-2)/N^3",
        "(N-1)/(4*N^3)",
        "(N-1)/(2*N^3)",
        "2*(N-1)*(N-2)/N^3",
        "(N-1)/N^3",
        "(N-1)/N^3",
        "(N-1)/N^3",
        "(N-1)/(2*N^3)",
        "1/(4*N^3)",
        "1/N-1/(4*N^2)",
    ],
    // q2
    [
        "0",
        "(N-1)*(N-2)/(2*N^2)",
        "0",
        "0",
        "(N-1)/(4*N^2)",
        "0",
        "0",
        "(N-1)/N^2",
        "0",
        "0",
        "0",
        "1/(4*N^2)",
        "(2*N+1)/(4*N)",
    ],
    // q3
    [
        "0",
        "0",
        "(N-1)*(N-2)/(2*N^2)",
        "0",
        "(N-1)/(4*N^2)",
        "0",
        "0",
        "0",
        "(N-1)/N^2",
        "0",
        "0",
        "1/(4*N^2)",
        "(2*N+1)/(4*N)",
    ],
    // q4
    [
        "0",
        "0",
        "0",
        "(N-1)*(N-2)/(2*N^2)",
        "0",
        "(N-1)/(4*N^2)",
        "(N-2)*(N-1)/(2*N^2)",
        "(N-1)/(2*N^2)",
        "(N-1)/(2*N^2)",
        "(N-1)/(2*N^2)",
        "(N-1)/(4*N^2)",
        "1/(4*N^2)",
        "(4*N-1)/(4*N^2)",
    ],
    // q5
    [
        "0",
        "0",
        "0",
        "0",
        "(N-1)/(4*N)",
        "0",
        "0",
        "0",
        "0",
        "0",
        "0",
        "1/(4*N)",
        "3/4",
    ],
    // q6
    [
        "0",
        "0",
        "0",
        "0",
        "0",
        "(N-1)/(4*N)",
        "0",
        "0",
        "0",
        "(N-1)/(2*N)",
        "(N-1)/(4*N)",
        "1/(4*N)",
        "3/(4*N)",
    ],
    // q7
    [
        "0",
        "0",
        "0",
        "r*(N-1)*(N-2)/N^2",
        "0",
        "r*(N-1)/(2*N^2)",
        "(N-1)*(N-2)*(1-r)/N^2",
        "(N-1)/(2*N^2)",
        "(N-1)/(2*N^2)",
        "(N-1)/(2*N^2)",
        "(N-1)*(1-r)/(2*N^2)",
        "1/(4*N^2)",
        "(4*N-1)/(4*N^2)",
    ],
    // q8
    [
        "0",
        "0",
        "0",
        "0",
        "0",
        "0",
        "0",
        "(N-1)/(2*N)",
        "0",
        "0",
        "0",
        "1/(4*N)",
        "(1+2*N)/(4*N)",
    ],
    // q9
    [
        "0",
        "0",
        "0",
        "0",
        "0",
        "0",
        "0",
        "0",
        "(N-1)/(2*N)",
        "0",
        "0",
        "1/(4*N)",
        "(1+2*N)/(4*N)",
    ],
    // q10
    [
        "0",
        "0",
        "0",
        "0",
        "0",
        "r*(N-1)/(2*N)",
        "0",
        "0",
        "0",
        "(N-1)/(2*N)",
        "(N-1)*(1-r)/(2*N)",
        "1/(4*N)",
        "3/(4*N)",
    ],
    // q11
    [
        "0",
        "0",
        "0",
        "0",
        "0",
        "r^2*(N-1)/N^2",
        "0",
        "0",
        "0",
        "2*r*(1-r)*(N-1)/N",
        "(N-1)*(1-r)^2/N",
        "R/(2*N)",
        "(1+2*r-2*r^2)/(2*N)",
    ],
    // q12
    [
        "0",
        "0",
        "0",
        "0",
        "0",
        "0",
        "0",
        "0",
        "0",
        "0",
        "0",
        "R/2",
        "(1+2*r-2*r^2)/2",
    ],
];

pub(crate) const NO_RECOMBINATION: [[&str; 13]; 12] = [
    // q1
    [
        "(N-1)*(N-2)*(N-3)/N^3",
        "(N-1)*(N-2)/(2*N^3)",
        "(N-1)*(N-2)/(2*N^3)",
        "2*(N-1)*(N-2)/N^3",
        "(N-1)/(4*N^3)",
        "(N-1)/(2*N^3)",
        "2*(N-1)*(N-2)/N^3",
        "(N-1)/N^3",
        "(N-1)/N^3",
        "(N-1)/N^3",
        "(N-1)/(2*N^3)",
        "1/(4*N^3)",
        "1/N-1/(4*N^2)",
    ],
    // q2
    [
        "(N-2)*(N-3)*(1-s)/N^2",
        "s*(N-1)*(N-2)/(2*N^2)",
        "(N-2)*(1-s)/(2*N^2)",
        "2*(N-2)*(1-s)/N^2",
        "s*(N-1)/(4*N^2)",
        "(1-s)/(2*N^2)",
        "2*(N-2)*(1-s)/N^2",
        "s*(N-1)/N^2",
        "(1-s)/N^2",
        "(1-s)/N^2",
        "(1-s)/(2*N^2)",
        "s/(4*N^2)",
        "(2*N*s-s+2)/(4*N)",
    ],
    // q3
    [
        "(N-2)*(N-3)*(1-s)/N^2",
        "(N-2)*(1-s)/(2*N^2)",
        "s*(N-1)*(N-2)/(2*N^2)",
        "2*(N-2)*(1-s)/N^2",
        "s*(N-1)/(4*N^2)",
        "(1-s)/(2*N^2)",
        "2*(N-2)*(1-s)/N^2",
        "(1-s)/N^2",
        "s*(N-1)/N^2",
        "(1-s)/N^2",
        "(1-s)/(2*N^2)",
        "s/(4*N^2)",
        "(2*N*s-s+2)/(4*N)",
    ],
    // q4
    [
        "(N-2)*(N-3)*(1-s)/N^2",
        "(N-2)*(1-s)/(2*N^2)",
        "(N-2)*(1-s)/(2*N^2)",
        "(N-2)*(N*s-4*s+3)/(2*N^2)",
        "(1-s)/(4*N^2)",
        "(N*s-2*s+1)/(4*N^2)",
        "(N-2)*(N*s-4*s+3)/(2*N^2)",
        "(N*s-2*s+1)/(2*N^2)",
        "(N*s-2*s+1)/(2*N^2)",
        "(N*s-2*s+1)/(2*N^2)",
        "(N*s-2*s+1)/(4*N^2)",
        "s/(4*N^2)",
        "(4*N-1)/(4*N^2)",
    ],
    // q5
    [
        "(N-2)*(N-3)*(1-s)^2/(N*(N-1))",
        "s*(N-2)*(1-s)/(2*N)",
        "s*(N-2)*(1-s)/(2*N)",
        "2*(N-2)*(1-s)^2/(N*(N-1))",
        "s^2*(N-1)/(4*N)",
        "(1-s)^2/(2*N*(N-1))",
        "2*(N-2)*(1-s)^2/(N*(N-1))",
        "s*(1-s)/N",
        "s*(1-s)/N",
        "(1-s)^2/(N*(N-1))",
        "(1-s)^2/(2*N*(N-1))",
        "s^2/(4*N)",
        "(4-s)*s/4",
    ],
    // q6
    [
        "(N-2)*(N-3)*(1-s)^2/(N*(N-1))",
        "(N-2)*(1-s)^2/(2*N*(N-1))",
        "(N-2)*(1-s)^2/(2*N*(N-1))",
        "(N-2)*(1-s)*(N*s-2*s+1)/(N*(N-1))",
        "(1-s)^2/(4*N*(N-1))",
        "(1-s)^2/(2*N*(2*N-2))+s^2*(N-1)/(4*N)",
        "(N-2)*(1-s)*(N*s-2*s+1)/(N*(N-1))",
        "s*(1-s)/N",
        "s*(1-s)/N",
        "(1-s)^2/(2*N*(N-1))+s^2*(N-1)/(2*N)",
        "(1-s)^2/(2*N*(2*N-2))+s^2*(N-1)/(4*N)",
        "s^2/(4*N)",
        "(4-s^2)/(4*N)-(1-s)^2/(4*N*(N-1))",
    ],
    // q7
    [
        "0",
        "0",
        "0",
        "0",
        "0",
        "0",
        "(N-1)*(N-2)/N^2",
        "(N-1)/(2*N^2)",
        "(N-1)/(2*N^2)",
        "(N-1)/(2*N^2)",
        "(N-1)/(2*N^2)",
        "1/(4*N^2)",
        "(4*N-1)/(4*N^2)",
    ],
    // q8
    [
        "0",
        "0",
        "0",
        "0",
        "0",
        "0",
        "(1-s)*(N-2)/N",
        "s*(N-1)/(2*N)",
        "(1-s)/(2*N)",
        "(1-s)/(2*N)",
        "(1-s)/(2*N)",
        "s/(4*N)",
        "(2*N*s-s+2)/(4*N)",
    ],
    // q9
    [
        "0",
        "0",
        "0",
        "0",
        "0",
        "0",
        "(1-s)*(N-2)/N",
        "(1-s)/(2*N)",
        "s*(N-1)/(2*N)",
        "(1-s)/(2*N)",
        "(1-s)/(2*N)",
        "s/(4*N)",
        "(2*N*s-s+2)/(4*N)",
    ],
    // q10
    [
        "0",
        "0",
        "0",
        "0",
        "0",
        "0",
        "(N-2)*(1-s)/N",
        "(1-s)/(2*N)",
        "(1-s)/(2*N)",
        "s*(N-1)/(2*N)",
        "s*(N-1)/(2*N)",
        "s/(4*N)",
        "(4-s)/(4*N)",
    ],
    // q11
    [
        "0",
        "0",
        "0",
        "0",
        "0",
        "0",
        "0",
        "0",
        "0",
        "0",
        "1-1/N",
        "1/(2*N)",
        "1/(2*N)",
    ],
    // q12
    [
        "0",
        "0",
        "0",
        "0",
        "0",
        "0",
        "0",
        "0",
        "0",
        "0",
        "1-s",
        "s/2",
        "s/2",
    ],
];

pub(crate) const FREE_RECOMBINATION: [[&str; 13]; 12] = [
    // q1
    [
        "(N-1)*(N-2)*(N-3)/N^3",
        "(N-1)*(N-2)/(2*N^3)",
        "(N-1)*(N-2)/(2*N^3)",
        "2*(N-1)*(N-2)/N^3",
        "(N-1)/(4*N^3)",
        "(N-1)/(2*N^3)",
        "2*(N-1)*(N-2)/N^3",
        "(N-1)/N^3",
        "(N-1)/N^3",
        "(N-1)/N^3",
        "(N-1)/(2*N^3)",
        "1/(4*N^3)",
        "1/N-1/(4*N^2)",
    ],
    // q2
    [
        "(N-2)*(N-3)*(1-s)/N^2",
        "s*(N-1)*(N-2)/(2*N^2)",
        "(N-2)*(1-s)/(2*N^2)",
        "2*(N-2)*(1-s)/N^2",
        "s*(N-1)/(4*N^2)",
        "(1-s)/(2*N^2)",
        "2*(N-2)*(1-s)/N^2",
        "s*(N-1)/N^2",
        "(1-s)/N^2",
        "(1-s)/N^2",
        "(1-s)/(2*N^2)",
        "s/(4*N^2)",
        "(2*N*s-s+2)/(4*N)",
    ],
    // q3
    [
        "(N-2)*(N-3)*(1-s)/N^2",
        "(N-2)*(1-s)/(2*N^2)",
        "s*(N-1)*(N-2)/(2*N^2)",
        "2*(N-2)*(1-s)/N^2",
        "s*(N-1)/(4*N^2)",
        "(1-s)/(2*N^2)",
        "2*(N-2)*(1-s)/N^2",
        "(1-s)/N^2",
        "s*(N-1)/N^2",
        "(1-s)/N^2",
        "(1-s)/(2*N^2)",
        "s/(4*N^2)",
        "(2*N*s-s+2)/(4*N)",
    ],
    // q4
    [
        "(N-2)*(N-3)*(1-s)/N^2",
        "(N-2)*(1-s)/(2*N^2)",
        "(N-2)*(1-s)/(2*N^2)",
        "(N-2)*(N*s-4*s+3)/(2*N^2)",
        "(1-s)/(4*N^2)",
        "(N*s-2*s+1)/(4*N^2)",
        "(N-2)*(N*s-4*s+3)/(2*N^2)",
        "(N*s-2*s+1)/(2*N^2)",
        "(N*s-2*s+1)/(2*N^2)",
        "(N*s-2*s+1)/(2*N^2)",
        "(N*s-2*s+1)/(4*N^2)",
        "s/(4*N^2)",
        "(4*N-1)/(4*N^2)",
    ],
    // q5
    [
        "(N-2)*(N-3)*(1-s)^2/(N*(N-1))",
        "s*(N-2)*(1-s)/(2*N)",
        "s*(N-2)*(1-s)/(2*N)",
        "2*(N-2)*(1-s)^2/(N*(N-1))",
        "s^2*(N-1)/(4*N)",
        "(1-s)^2/(2*N*(N-1))",
        "2*(N-2)*(1-s)^2/(N*(N-1))",
        "s*(1-s)/N",
        "s*(1-s)/N",
        "(1-s)^2/(N*(N-1))",
        "(1-s)^2/(2*N*(N-1))",
        "s^2/(4*N)",
        "(4-s)*s/4",
    ],
    // q6
    [
        "(N-2)*(N-3)*(1-s)^2/(N*(N-1))",
        "(N-2)*(1-s)^2/(2*N*(N-1))",
        "(N-2)*(1-s)^2/(2*N*(N-1))",
        "(N-2)*(1-s)*(N*s-2*s+1)/(N*(N-1))",
        "(1-s)^2/(4*N*(N-1))",
        "(1-s)^2/(2*N*(2*N-2))+s^2*(N-1)/(4*N)",
        "(N-2)*(1-s)*(N*s-2*s+1)/(N*(N-1))",
        "s*(1-s)/N",
        "s*(1-s)/N",
        "(1-s)^2/(2*N*(N-1))+s^2*(N-1)/(2*N)",
        "(1-s)^2/(2*N*(2*N-2))+s^2*(N-1)/(4*N)",
        "s^2/(4*N)",
        "(4-s^2)/(4*N)-(1-s)^2/(4*N*(N-1))",
    ],
    // q7
    [
        "0",
        "0",
        "0",
        "(N-1)*(N-2)/(2*N^2)",
        "0",
        "(N-1)/(4*N^2)",
        "(N-2)*(N-1)/(2*N^2)",
        "(N-1)/(2*N^2)",
        "(N-1)/(2*N^2)",
        "(N-1)/(2*N^2)",
        "(N-1)/(4*N^2)",
        "1/(4*N^2)",
        "(4*N-1)/(4*N^2)",
    ],
    // q8
    [
        "0",
        "0",
        "0",
        "(1-s)*(N-2)/(2*N)",
        "0",
        "(1-s)/(4*N)",
        "(1-s)*(N-2)/(2*N)",
        "s*(N-1)/(2*N)",
        "(1-s)/(2*N)",
        "(1-s)/(2*N)",
        "(1-s)/(4*N)",
        "s/(4*N)",
        "(2*N*s-s+2)/(4*N)",
    ],
    // q9
    [
        "0",
        "0",
        "0",
        "(1-s)*(N-2)/(2*N)",
        "0",
        "(1-s)/(4*N)",
        "(1-s)*(N-2)/(2*N)",
        "(1-s)/(2*N)",
        "s*(N-1)/(2*N)",
        "(1-s)/(2*N)",
        "(1-s)/(4*N)",
        "s/(4*N)",
        "(2*N*s-s+2)/(4*N)",
    ],
    // q10
    [
        "0",
        "0",
        "0",
        "(N-2)*(1-s)/(2*N)",
        "0",
        "s*(N-1)/(4*N)",
        "(1-s)*(N-2)/(2*N)",
        "(1-s)/(2*N)",
        "(1-s)/(2*N)",
        "s*(N-1)/(2*N)",
        "s*(N-1)/(4*N)",
        "s/(4*N)",
        "(4-s)/(4*N)",
    ],
    // q11
    [
        "0",
        "0",
        "0",
        "0",
        "0",
        "(N-1)/(4*N)",
        "0",
        "0",
        "0",
        "(N-1)/(2*N)",
        "(N-1)/(4*N)",
        "1/(4*N)",
        "3/(4*N)",
    ],
    // q12
    [
        "0",
        "0",
        "0",
        "0",
        "0",
        "(1-s)/4",
        "0",
        "0",
        "0",
        "(1-s)/2",
        "(1-s)/4",
        "s/4",
        "3*s/4",
    ],
];

/// Sparse form used for the `N -> infinity` limit tables: for each row
/// `q1..q12`, the nonzero `(column, formula)` pairs. Columns use the same
/// 0-based order as the dense tables (`12` is `q0`).
pub(crate) type SparseTable = [&'static [(usize, &'static str)]; 12];

/// Limit of the total-selfing table; depends on `r` only.
pub(crate) const TOTAL_SELFING_LIMIT: SparseTable = [
    &[(0, "1")],
    &[(1, "1/2"), (12, "1/2")],
    &[(2, "1/2"), (12, "1/2")],
    &[(3, "1/2"), (6, "1/2")],
    &[(4, "1/4"), (12, "3/4")],
    &[(5, "1/4"), (9, "1/2"), (10, "1/4")],
    &[(3, "r"), (6, "1-r")],
    &[(7, "1/2"), (12, "1/2")],
    &[(8, "1/2"), (12, "1/2")],
    &[(5, "r/2"), (9, "1/2"), (10, "(1-r)/2")],
    &[(5, "r^2"), (9, "2*r*(1-r)"), (10, "(1-r)^2")],
    &[(11, "((1-r)^2+r^2)/2"), (12, "(1+2*r-2*r^2)/2")],
];

/// Limit of the no-recombination table; depends on `s` only.
pub(crate) const NO_RECOMBINATION_LIMIT: SparseTable = [
    &[(0, "1")],
    &[(0, "1-s"), (1, "s/2"), (12, "s/2")],
    &[(0, "1-s"), (2, "s/2"), (12, "s/2")],
    &[(0, "1-s"), (3, "s/2"), (6, "s/2")],
    &[(0, "(1-s)^2"), (1, "s*(1-s)/2"), (2, "s*(1-s)/2"), (4, "s^2/4"), (12, "(4*s-s^2)/4")],
    &[(0, "(1-s)^2"), (3, "s*(1-s)"), (5, "s^2/4"), (6, "s*(1-s)"), (9, "s^2/2"), (10, "s^2/4")],
    &[(6, "1")],
    &[(6, "1-s"), (7, "s/2"), (12, "s/2")],
    &[(6, "1-s"), (8, "s/2"), (12, "s/2")],
    &[(6, "1-s"), (9, "s/2"), (10, "s/2")],
    &[(10, "1")],
    &[(10, "1-s"), (11, "s/2"), (12, "s/2")],
];

/// Limit of the free-recombination table; depends on `s` only.
pub(crate) const FREE_RECOMBINATION_LIMIT: SparseTable = [
    &[(0, "1")],
    &[(0, "1-s"), (1, "s/2"), (12, "s/2")],
    &[(0, "1-s"), (2, "s/2"), (12, "s/2")],
    &[(0, "1-s"), (3, "s/2"), (6, "s/2")],
    &[(0, "(1-s)^2"), (1, "s*(1-s)/2"), (2, "s*(1-s)/2"), (4, "s^2/4"), (12, "(4-s)*s/4")],
    &[(0, "(1-s)^2"), (3, "s*(1-s)"), (5, "s^2/4"), (6, "s*(1-s)"), (9, "s^2/2"), (10, "s^2/4")],
    &[(3, "1/2"), (6, "1/2")],
    &[(3, "(1-s)/2"), (6, "(1-s)/2"), (7, "s/2"), (12, "s/2")],
    &[(3, "(1-s)/2"), (6, "(1-s)/2"), (8, "s/2"), (12, "s/2")],
    &[(3, "(1-s)/2"), (5, "s/4"), (6, "(1-s)/2"), (9, "s/2"), (10, "s/4")],
    &[(5, "1/4"), (9, "1/2"), (10, "1/4")],
    &[(5, "(1-s)/4"), (9, "(1-s)/2"), (10, "(1-s)/4"), (11, "s/4"), (12, "3*s/4")],
];

/// Which published table an entry belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Table {
    General,
    TotalSelfing,
    NoRecombination,
    FreeRecombination,
}

/// A misprinted table entry together with its corrected formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Erratum {
    pub table: Table,
    /// Row state, 1-based (`q1..q12`).
    pub row: usize,
    /// Column index, 0-based over `q1..q12, q0`.
    pub col: usize,
    pub printed: &'static str,
    pub corrected: &'static str,
    pub note: &'static str,
}

/// Every known misprint in the transition tables.
///
/// Each correction was established against the exact one-step enumeration
/// of the reproduction rules; the tests in this module and in `tests/`
/// re-derive the evidence.
pub const ERRATA: &[Erratum] = &[
    Erratum {
        table: Table::General,
        row: 3,
        col: 9,
        printed: "(1-s)/(2*N^2)",
        corrected: "(1-s)/N^2",
        note: "q3 -> q10 and q3 -> q11 are interchanged in print; row q2 and the r=0, r=1/2 tables carry the correct pair",
    },
    Erratum {
        table: Table::General,
        row: 3,
        col: 10,
        printed: "(1-s)/N^2",
        corrected: "(1-s)/(2*N^2)",
        note: "partner of the q3 -> q10 interchange",
    },
    Erratum {
        table: Table::TotalSelfing,
        row: 11,
        col: 5,
        printed: "r^2*(N-1)/N^2",
        corrected: "r^2*(N-1)/N",
        note: "printed row q11 sums to 1 - r^2 (N-1)^2/N^2; the limit table already shows r^2",
    },
];

pub(crate) fn dense(table: Table) -> &'static [[&'static str; 13]; 12] {
    match table {
        Table::General => &GENERAL,
        Table::TotalSelfing => &TOTAL_SELFING,
        Table::NoRecombination => &NO_RECOMBINATION,
        Table::FreeRecombination => &FREE_RECOMBINATION,
    }
}

/// The formula for `(row, col)` with errata applied when `corrected`.
pub(crate) fn entry(table: Table, row: usize, col: usize, corrected: bool) -> &'static str {
    let printed = dense(table)[row - 1][col];
    if corrected {
        if let Some(e) = ERRATA.iter().find(|e| e.table == table && e.row == row && e.col == col) {
            return e.corrected;
        }
    }
    printed
}
