//! Reference codes: the CCZ codes over RM bases and the punctured RM tables.

use crate::codefile::{materialize, CodeFile, Provenance};
use crate::error::Result;
use crate::f2::BitMatrix;
use crate::reedmuller::{rm_generator, Monomial};
use crate::trio::GenTrioMatrix;

/// One punctured Reed-Muller code with its published parameters.
#[derive(Clone, Copy, Debug)]
pub struct PuncturedRow {
    pub r: usize,
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub a_d: u64,
    /// `a_d` is only an upper bound.
    pub a_d_is_bound: bool,
    pub coords: &'static [usize],
}

impl PuncturedRow {
    pub fn label(&self) -> String {
        format!("[[{},{},{}]]", self.n, self.k, self.d)
    }

    pub fn provenance(&self) -> Provenance {
        Provenance { r: self.r, m: self.m, puncture: self.coords.to_vec() }
    }

    pub fn code(&self) -> Result<GenTrioMatrix> {
        materialize(&self.provenance())
    }
}

pub const TABLE_I: [PuncturedRow; 5] = [
    PuncturedRow {
        r: 2,
        m: 7,
        n: 114,
        k: 14,
        d: 3,
        a_d: 30,
        a_d_is_bound: false,
        coords: &[3, 10, 19, 20, 64, 66, 72, 96, 99, 104, 110, 114, 115, 124],
    },
    PuncturedRow {
        r: 2,
        m: 7,
        n: 112,
        k: 16,
        d: 3,
        a_d: 96,
        a_d_is_bound: false,
        coords: &[6, 8, 13, 14, 17, 28, 29, 33, 44, 57, 65, 75, 79, 82, 106, 116],
    },
    PuncturedRow {
        r: 2,
        m: 7,
        n: 109,
        k: 19,
        d: 3,
        a_d: 324,
        a_d_is_bound: false,
        coords: &[10, 15, 16, 17, 32, 39, 40, 41, 48, 59, 66, 69, 72, 81, 100, 102, 108, 120, 126],
    },
    PuncturedRow {
        r: 2,
        m: 7,
        n: 118,
        k: 10,
        d: 4,
        a_d: 210,
        a_d_is_bound: false,
        coords: &[11, 17, 19, 59, 74, 76, 91, 99, 105, 110],
    },
    PuncturedRow {
        r: 2,
        m: 7,
        n: 116,
        k: 12,
        d: 4,
        a_d: 495,
        a_d_is_bound: false,
        coords: &[0, 31, 52, 61, 73, 94, 96, 112, 114, 115, 118, 120],
    },
];

pub const TABLE_II: [PuncturedRow; 5] = [
    PuncturedRow {
        r: 3,
        m: 10,
        n: 863,
        k: 161,
        d: 3,
        a_d: 3231,
        a_d_is_bound: false,
        coords: &[
            3, 4, 7, 10, 15, 39, 42, 44, 45, 49, 59, 66, 68, 70, 72, 74, 91, 103, 104, 109, 119, 120, 122, 123, 130,
            161, 164, 170, 183, 186, 200, 208, 214, 233, 236, 237, 248, 270, 278, 288, 294, 295, 296, 304, 307, 321,
            323, 338, 341, 347, 353, 356, 359, 360, 365, 374, 377, 404, 411, 414, 425, 443, 447, 455, 465, 470, 474,
            477, 480, 482, 492, 493, 502, 507, 509, 511, 513, 517, 525, 528, 539, 543, 550, 555, 567, 577, 581, 598,
            599, 600, 602, 603, 608, 609, 612, 616, 620, 621, 628, 638, 646, 652, 659, 660, 669, 678, 681, 687, 714,
            728, 738, 739, 741, 743, 744, 745, 748, 750, 758, 768, 786, 791, 794, 795, 806, 822, 843, 844, 845, 853,
            855, 864, 865, 884, 889, 891, 892, 902, 907, 913, 916, 921, 939, 942, 943, 944, 945, 951, 953, 961, 965,
            971, 978, 980, 984, 985, 992, 1002, 1005, 1012, 1018,
        ],
    },
    PuncturedRow {
        r: 3,
        m: 10,
        n: 872,
        k: 152,
        d: 4,
        a_d: 1514,
        a_d_is_bound: false,
        coords: &[
            31, 35, 45, 46, 50, 62, 85, 89, 91, 113, 118, 119, 122, 127, 140, 144, 157, 168, 169, 171, 173, 186, 190,
            210, 218, 219, 228, 230, 237, 244, 249, 254, 263, 271, 281, 282, 308, 336, 352, 353, 398, 404, 405, 411,
            412, 441, 444, 455, 456, 460, 471, 474, 475, 480, 484, 488, 492, 502, 504, 507, 511, 517, 520, 522, 532,
            542, 543, 559, 570, 574, 577, 578, 579, 580, 583, 592, 598, 601, 602, 605, 608, 612, 615, 618, 620, 637,
            643, 644, 653, 658, 667, 688, 690, 694, 714, 717, 724, 727, 737, 745, 752, 754, 758, 764, 765, 770, 782,
            794, 795, 802, 808, 812, 813, 814, 815, 823, 824, 838, 847, 849, 850, 852, 861, 863, 867, 871, 874, 880,
            901, 907, 911, 915, 919, 921, 924, 926, 941, 950, 954, 969, 971, 972, 976, 977, 982, 991, 995, 999, 1008,
            1013, 1014, 1023,
        ],
    },
    PuncturedRow {
        r: 3,
        m: 10,
        n: 887,
        k: 137,
        d: 5,
        a_d: 709,
        a_d_is_bound: false,
        coords: &[
            11, 21, 30, 37, 39, 53, 68, 74, 78, 82, 98, 105, 107, 120, 130, 136, 148, 149, 152, 161, 162, 163, 181,
            194, 209, 210, 211, 233, 234, 243, 244, 267, 269, 274, 277, 281, 284, 298, 317, 324, 325, 329, 341, 361,
            362, 375, 389, 399, 400, 405, 412, 415, 423, 425, 449, 480, 487, 495, 507, 511, 522, 538, 542, 557, 563,
            578, 579, 584, 593, 600, 609, 610, 619, 622, 623, 635, 638, 639, 640, 643, 644, 651, 653, 655, 657, 661,
            671, 672, 678, 680, 692, 714, 727, 737, 775, 777, 792, 796, 806, 817, 826, 827, 831, 833, 834, 837, 851,
            852, 854, 857, 866, 868, 871, 875, 880, 890, 891, 896, 897, 898, 916, 924, 936, 938, 941, 958, 964, 965,
            966, 973, 975, 983, 984, 990, 996, 997, 1022,
        ],
    },
    PuncturedRow {
        r: 3,
        m: 10,
        n: 912,
        k: 112,
        d: 6,
        a_d: 1191,
        a_d_is_bound: false,
        coords: &[
            11, 21, 37, 39, 68, 74, 78, 82, 98, 107, 130, 148, 152, 161, 162, 163, 181, 194, 209, 210, 211, 233, 243,
            244, 267, 269, 274, 277, 298, 317, 324, 325, 329, 341, 361, 362, 399, 405, 412, 415, 423, 425, 480, 487,
            495, 507, 522, 542, 557, 563, 579, 584, 593, 600, 609, 610, 619, 622, 623, 635, 639, 640, 653, 655, 657,
            661, 671, 672, 678, 680, 692, 714, 727, 737, 775, 777, 792, 796, 806, 826, 827, 831, 833, 834, 837, 851,
            852, 854, 857, 866, 871, 875, 880, 890, 891, 896, 897, 898, 916, 924, 936, 938, 941, 958, 965, 966, 983,
            984, 990, 996, 997, 1022,
        ],
    },
    PuncturedRow {
        r: 3,
        m: 10,
        n: 937,
        k: 87,
        d: 7,
        a_d: 1887905,
        a_d_is_bound: true,
        coords: &[
            21, 37, 39, 68, 74, 82, 98, 130, 148, 152, 162, 163, 194, 209, 210, 211, 233, 244, 267, 269, 274, 317,
            324, 325, 329, 341, 361, 362, 399, 405, 412, 415, 423, 480, 487, 495, 507, 522, 542, 557, 563, 584, 593,
            600, 609, 610, 623, 635, 639, 640, 657, 661, 671, 672, 692, 714, 727, 737, 777, 792, 796, 826, 827, 831,
            833, 834, 837, 851, 852, 854, 857, 871, 875, 880, 890, 891, 896, 897, 898, 924, 936, 958, 966, 984, 996,
            997, 1022,
        ],
    },
];

fn mono_block(m: usize, monos: &[&str]) -> Result<BitMatrix> {
    let rows = monos.iter().map(|s| Monomial::parse(m, s).map(|x| x.codeword())).collect::<Result<Vec<_>>>()?;
    BitMatrix::from_rows(1 << m, rows)
}

/// Code over `2^m` points with rows given as monomials (`"x1 x3"`, `"1"`).
pub fn code_from_monomials(m: usize, t: &[&str], cs: &[&str], ccz: &[&str], g0: &[&str]) -> Result<GenTrioMatrix> {
    GenTrioMatrix::new(1 << m, mono_block(m, t)?, mono_block(m, cs)?, mono_block(m, ccz)?, mono_block(m, g0)?)
}

/// `[[8,3,2]]`: one CCZ triple `x1, x2, x3` over `G0 = {1}`.
pub fn m3_code() -> GenTrioMatrix {
    code_from_monomials(3, &[], &[], &["x1", "x2", "x3"], &["1"]).expect("static code")
}

pub const M6_CCZ: [&str; 6] = ["x1 x2", "x3 x4", "x5 x6", "x2 x3", "x4 x5", "x6 x1"];
pub const M6_G0: [&str; 11] =
    ["1", "x1", "x2", "x3", "x4", "x5", "x6", "x1 x3", "x3 x5", "x1 x5", "x1 x3 x5"];

/// `n = 64`, two CCZ triples, distance 4.
pub fn m6_code() -> GenTrioMatrix {
    code_from_monomials(6, &[], &[], &M6_CCZ, &M6_G0).expect("static code")
}

pub const M9_CCZ: [&str; 30] = [
    "x4 x5 x7", "x2 x6 x8", "x1 x3 x9",
    "x4 x5 x9", "x2 x7 x8", "x1 x3 x6",
    "x3 x4 x6", "x1 x5 x8", "x2 x7 x9",
    "x1 x8 x9", "x3 x4 x7", "x2 x5 x6",
    "x2 x5 x9", "x1 x3 x4", "x6 x7 x8",
    "x1 x4 x5", "x2 x3 x8", "x6 x7 x9",
    "x3 x5 x6", "x1 x2 x7", "x4 x8 x9",
    "x1 x3 x8", "x2 x4 x9", "x5 x6 x7",
    "x2 x3 x5", "x1 x7 x9", "x4 x6 x8",
    "x3 x8 x9", "x1 x5 x7", "x2 x4 x6",
];
pub const M9_G0_EXTRA: [&str; 4] = ["x1 x2 x9", "x1 x2 x8", "x6 x8 x9", "x3 x7 x8"];

/// `[[512,30,8]]`: ten CCZ triples over `G0 = RM(2,9)` plus four cubic monomials.
pub fn m9_code() -> GenTrioMatrix {
    let rm = rm_generator(2, 9).expect("static code");
    let mut g0: Vec<String> = rm.monomials.iter().map(|x| x.to_string()).collect();
    g0.extend(M9_G0_EXTRA.iter().map(|s| s.to_string()));
    let g0_refs: Vec<&str> = g0.iter().map(String::as_str).collect();
    code_from_monomials(9, &[], &[], &M9_CCZ, &g0_refs).expect("static code")
}

/// Name and contents of each shipped data file.
pub const DATA_FILES: [(&str, &str); 13] = [
    ("m3_8.code", include_str!("../data/m3_8.code")),
    ("m6_64.code", include_str!("../data/m6_64.code")),
    ("m9_512.code", include_str!("../data/m9_512.code")),
    ("rm27_114_14_3.code", include_str!("../data/rm27_114_14_3.code")),
    ("rm27_112_16_3.code", include_str!("../data/rm27_112_16_3.code")),
    ("rm27_109_19_3.code", include_str!("../data/rm27_109_19_3.code")),
    ("rm27_118_10_4.code", include_str!("../data/rm27_118_10_4.code")),
    ("rm27_116_12_4.code", include_str!("../data/rm27_116_12_4.code")),
    ("rm310_863_161_3.code", include_str!("../data/rm310_863_161_3.code")),
    ("rm310_872_152_4.code", include_str!("../data/rm310_872_152_4.code")),
    ("rm310_887_137_5.code", include_str!("../data/rm310_887_137_5.code")),
    ("rm310_912_112_6.code", include_str!("../data/rm310_912_112_6.code")),
    ("rm310_937_87_7.code", include_str!("../data/rm310_937_87_7.code")),
];

/// Looks up a shipped code file by name (with or without a directory prefix).
pub fn shipped(name: &str) -> Option<&'static str> {
    let base = name.rsplit('/').next().unwrap_or(name);
    DATA_FILES.iter().find(|(n, _)| *n == base).map(|(_, t)| *t)
}

/// File name used for a punctured table row.
pub fn row_file_name(row: &PuncturedRow) -> String {
    format!("rm{}{}_{}_{}_{}.code", row.r, row.m, row.n, row.k, row.d)
}

/// Renders every reference code as a code file; punctured rows are written
/// as recipes (base code plus coordinates).
pub fn render_data_files() -> Vec<(String, String)> {
    let mut out = Vec::new();
    let full = |comment: &str, code: GenTrioMatrix| {
        CodeFile { comments: vec![comment.to_string()], provenance: None, code }.serialize()
    };
    out.push(("m3_8.code".to_string(), full("[[8,3,2]] CCZ code: triple x1, x2, x3 over G0 = {1}", m3_code())));
    out.push(("m6_64.code".to_string(), full("n = 64 CCZ code with two triples, distance 4", m6_code())));
    out.push(("m9_512.code".to_string(), full("[[512,30,8]] CCZ code with ten triples", m9_code())));
    for row in TABLE_I.iter().chain(TABLE_II.iter()) {
        let list: Vec<String> = row.coords.iter().map(|c| c.to_string()).collect();
        let bound = if row.a_d_is_bound { "<=" } else { "=" };
        let text = format!(
            "# {} punctured from RM({},{}), A_{} {} {}\nbase = RM({},{})\npuncture = {}\n",
            row.label(),
            row.r,
            row.m,
            row.d,
            bound,
            row.a_d,
            row.r,
            row.m,
            list.join(",")
        );
        out.push((row_file_name(row), text));
    }
    out
}
