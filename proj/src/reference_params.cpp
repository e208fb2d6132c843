#include "mvp/reference_params.hpp"

namespace mvp {

namespace {

// Model 1: rows are covariates (intercept first), columns products 1..8.
const double kBetaModel1[] = {
    1.4026, -1.2448, -0.3887, 1.1099, -2.4041, -0.1309, -1.7113, 0.6777,
    0.1974, -0.1334, 0.0110, 0.0752, -0.5025, -0.0202, -0.2892, 0.0644,
    -0.1309, 0.0614, -0.0620, -0.0003, 0.3161, -0.0032, 0.0857, 0.0109,
    -0.3881, 0.1814, -0.2384, -0.1042, 0.8045, -0.0268, 0.3775, 0.0017,
    -0.0430, 0.0008, -0.0372, -0.0140, 0.0434, -0.0189, -0.0471, 0.0070,
    -0.2479, -0.0529, 0.0285, 0.0762, 0.0914, 0.1058, -0.0275, 0.1353,
    -0.0199, 0.1012, -0.0094, 0.0513, 0.0666, 0.0723, -0.0719, 0.0054,
    0.0500, -0.1327, 0.0604, -0.0887, 0.3982, -0.0249, -0.5218, -0.2285,
    0.0163, -0.0748, 0.0217, -0.0227, 0.0068, 0.0397, -0.0821, -0.0248,
    -0.0591, 0.0000, -0.0303, 0.0288, 0.0034, 0.0306, -0.0235, -0.1427,
    -0.9902, 0.2436, 0.0060, 0.0128, 0.2350, -0.2954, 0.2541, 0.0355,
    0.0426, -0.0107, -0.0933, -0.0022, 0.1565, 0.0293, 0.0290, -0.3945,
    -0.0144, 0.0272, -0.0206, 0.0004, -0.0261, 0.0086, -0.0185, 0.0190,
    -0.0916, 0.0869, 0.0691, -0.0006, -0.0094, 0.0285, 0.0033, -0.2036,
    -1.7332, 1.3001, -0.0078, -0.0903, 0.9163, -0.9867, 0.5286, -0.0371,
    -0.0462, 0.0350, -0.0626, -0.0410, 0.9787, -0.0504, 0.5930, -0.0539,
    -0.3189, -0.0043, 0.1956, 0.0249, 0.6284, -0.0775, 0.2036, -0.1144,
    -0.2846, 0.1912, -0.2151, -0.1990, -0.0067, 0.0366, -0.1458, 0.0115,
    -0.3581, 0.0496, 0.0475, 0.0106, 0.2882, 0.0059, 0.0128, 0.0312,
    0.4713, 0.3618, -0.0934, -0.2596, -0.0112, -0.0316, -0.0441, -0.0278,
    -0.1822, -0.2448, 0.0300, 0.0612, 0.0552, 0.0351, 0.0469, 0.0816,
    0.0815, 0.0368, -0.2582, -0.0616, 0.0318, 0.0640, -0.0127, 0.0833,
    -0.3389, -0.1969, 0.2133, 0.0628, 0.2300, -0.0034, 0.3100, -0.0164,
    -0.0245, -0.0540, -0.0202, -0.0029, 0.0080, 0.0603, 0.0072, 0.0075,
    0.0321, -0.0631, -0.0683, -0.0167, -0.0365, 0.2909, -0.0173, -0.0046,
    -0.2666, -0.0118, -0.0266, -0.0129, -0.0038, 0.0422, 0.0867, 0.0308,
    -0.5183, -0.0143, 0.0125, 0.0248, 0.0144, -0.0531, 0.0461, 0.0332,
};
const double kCorrModel1[] = {
    -0.1157,
    -0.0502, 0.1617,
    -0.0481, 0.0454, 0.5891,
    -0.2354, -0.0255, 0.1759, 0.2424,
    0.4721, -0.2702, 0.0144, 0.0358, -0.0695,
    -0.2054, -0.0540, 0.1849, 0.1877, 0.5185, -0.0051,
    -0.0196, -0.0491, 0.0205, 0.1044, -0.0788, 0.1841, 0.2046,
};
const double kSigmaAlphaModel1[] = {
    0.5147,
    0.3009, 0.6492,
    0.2733, 0.3026, 1.3021,
    0.2481, 0.2659, 0.2525, 1.5329,
    0.0764, 0.1866, -0.0177, 0.5141, 1.0586,
    0.2012, 0.2195, 0.1101, 0.2469, 0.2856, 1.4533,
    0.0611, 0.2400, 0.2573, -0.2164, 0.0148, 0.2915, 1.9449,
    0.2570, 0.3344, 0.0750, 0.2315, 0.2537, 0.4904, 0.4139, 1.2432,
};
const double kBetaModel2[] = {
    1.4161, -1.2576, -0.3964, 1.0991, -2.3943, -0.1142, -1.7657, 0.6918,
    0.1949, -0.1329, 0.0104, 0.0744, -0.5063, -0.0205, -0.2880, 0.0637,
    -0.1326, 0.0621, -0.0624, -0.0002, 0.3173, -0.0037, 0.0906, 0.0108,
    -0.3936, 0.1851, -0.2406, -0.1041, 0.8095, -0.0270, 0.3849, 0.0013,
    -0.0426, 0.0008, -0.0388, -0.0144, 0.0441, -0.0188, -0.0449, 0.0068,
    -0.2464, -0.0541, 0.0270, 0.0788, 0.0940, 0.1069, -0.0248, 0.1364,
    -0.0206, 0.1042, -0.0099, 0.0516, 0.0678, 0.0719, -0.0702, 0.0056,
    0.0493, -0.1363, 0.0615, -0.0869, 0.4000, -0.0256, -0.5274, -0.2311,
    0.0160, -0.0763, 0.0213, -0.0222, 0.0070, 0.0408, -0.0869, -0.0254,
    -0.0599, -0.0011, -0.0300, 0.0292, 0.0040, 0.0317, -0.0221, -0.1433,
    -0.9956, 0.2444, 0.0070, 0.0135, 0.2375, -0.2959, 0.2561, 0.0347,
    0.0436, -0.0102, -0.0963, -0.0020, 0.1570, 0.0314, 0.0282, -0.3971,
    -0.0141, 0.0269, -0.0208, 0.0002, -0.0271, 0.0090, -0.0186, 0.0198,
    -0.0914, 0.0879, 0.0667, -0.0009, -0.0101, 0.0294, 0.0029, -0.2035,
    -1.7437, 1.3074, -0.0082, -0.0889, 0.9236, -0.9909, 0.5354, -0.0371,
    -0.0458, 0.0344, -0.0632, -0.0403, 0.9850, -0.0498, 0.6007, -0.0543,
    -0.3206, -0.0043, 0.1978, 0.0245, 0.6323, -0.0786, 0.2120, -0.1143,
    -0.2861, 0.1936, -0.2169, -0.1996, -0.0068, 0.0359, -0.1438, 0.0116,
    -0.3591, 0.0485, 0.0470, 0.0099, 0.2882, 0.0067, 0.0150, 0.0323,
    0.4724, 0.3662, -0.0948, -0.2629, -0.0120, -0.0331, -0.0430, -0.0287,
    -0.1878, -0.2417, 0.0289, 0.0618, 0.0538, 0.0329, 0.0457, 0.0814,
    0.0831, 0.0374, -0.2582, -0.0624, 0.0318, 0.0652, -0.0130, 0.0815,
    -0.3401, -0.1988, 0.2152, 0.0642, 0.2321, -0.0033, 0.3133, -0.0162,
    -0.0253, -0.0558, -0.0204, -0.0026, 0.0084, 0.0595, 0.0082, 0.0074,
    0.0317, -0.0639, -0.0697, -0.0177, -0.0373, 0.2896, -0.0177, -0.0044,
    -0.2665, -0.0117, -0.0266, -0.0126, -0.0038, 0.0444, 0.0892, 0.0320,
    -0.5218, -0.0133, 0.0132, 0.0255, 0.0148, -0.0546, 0.0467, 0.0333,
};
const double kGammaModel2[] = {
    -0.0662, 0.0248, -0.4417, 0.0732, 0.0368, 0.5999, -0.4474, -0.0260,
    -0.0183, -0.0958, 0.0709, 0.0418, 0.2067, 0.1019, -0.1456, -0.0108,
    -0.0002, -0.0154, -0.1203, 0.2229, 0.0434, 0.0360, -0.0324, -0.0118,
    -0.0210, -0.0349, 0.0416, -0.0372, -0.0617, 0.0036, 0.0509, 0.0038,
    0.0086, 0.0080, 0.0207, -0.0061, 0.0175, -0.0044, 0.0093, -0.0100,
    0.0839, 0.0564, -0.0087, 0.3466, 0.0911, -0.2385, -0.0965, 0.5515,
    -0.0888, 0.0065, 0.0706, -0.0078, 0.0099, 0.0048, -0.0222, 0.1774,
};
const double kCorrModel2[] = {
    -0.1126,
    -0.0515, 0.1625,
    -0.0450, 0.0449, 0.5873,
    -0.2349, -0.0263, 0.1779, 0.2414,
    0.4712, -0.2679, 0.0153, 0.0379, -0.0696,
    -0.2065, -0.0537, 0.1836, 0.1889, 0.5177, -0.0055,
    -0.0204, -0.0494, 0.0189, 0.1048, -0.0771, 0.1831, 0.2058,
};
const double kSigmaAlphaModel2[] = {
    0.5574,
    0.3005, 0.6923,
    0.2760, 0.3040, 1.3574,
    0.2490, 0.2679, 0.2590, 1.6084,
    0.0795, 0.1875, -0.0188, 0.5244, 1.1040,
    0.2056, 0.2199, 0.1065, 0.2538, 0.2911, 1.5142,
    0.0634, 0.2418, 0.2586, -0.2229, 0.0135, 0.2950, 2.0530,
    0.2592, 0.3358, 0.0751, 0.2383, 0.2612, 0.4906, 0.4144, 1.2942,
};

Mat table(const double* v, int rows, int cols) {
  Mat m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = v[r * cols + c];
  return m;
}

// Strict lower triangle by rows, unit diagonal.
Mat corr_from_lower(const double* v, int d) {
  Mat m = Mat::Identity(d, d);
  int idx = 0;
  for (int i = 1; i < d; ++i)
    for (int j = 0; j < i; ++j) m(i, j) = m(j, i) = v[idx++];
  return m;
}

// Lower triangle including the diagonal, by rows.
Mat cov_from_lower(const double* v, int d) {
  Mat m(d, d);
  int idx = 0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = v[idx++];
  return m;
}

ReferenceParameterSet build() {
  constexpr int d = 8;
  constexpr int k = 27;
  constexpr int g = 7;
  ReferenceParameterSet p;
  p.codebook = reference_codebook();
  p.covariate_labels = p.codebook.covariate_names();
  for (int i = 0; i < d; ++i) p.outcome_labels.push_back("product" + std::to_string(i + 1));
  p.codebook.outcomes = p.outcome_labels;
  p.individual_labels = {"female", "fellow", "family_planning", "bulk_bill",
                         "age",    "australian_graduate", "urban"};
  p.individual_binary = {true, true, true, true, false, true, true};

  p.model1.beta = table(kBetaModel1, k, d).transpose();
  p.model1.corr = corr_from_lower(kCorrModel1, d);
  p.model1.sigma_alpha = cov_from_lower(kSigmaAlphaModel1, d);
  p.model2.beta = table(kBetaModel2, k, d).transpose();
  p.model2.gamma = table(kGammaModel2, g, d).transpose();
  p.model2.corr = corr_from_lower(kCorrModel2, d);
  p.model2.sigma_alpha = cov_from_lower(kSigmaAlphaModel2, d);
  return p;
}

}  // namespace

CodebookSpec reference_codebook() {
  CodebookSpec cb;
  for (int i = 0; i < 8; ++i) cb.outcomes.push_back("product" + std::to_string(i + 1));
  cb.categorical = {
      {"age", {"dagegp1", "dagegp2", "dagegp3", "dagegp4"}, "dagegp2"},
      {"reason", {"drfe1", "drfe2", "drfe3", "drfe4"}, "drfe1"},
      {"periods", {"dbleed1", "dbleed2", "dbleed3"}, "dbleed3"},
      {"blood_pressure", {"dbp1", "dbp2", "dbp3"}, "dbp2"},
      {"relationship", {"drel1", "drel2", "drel3", "drel4"}, "drel2"},
      {"children", {"dchild1", "dchild2", "dchild3"}, "dchild3"},
      {"fertility", {"dfut1", "dfut2", "dfut3", "dfut4"}, "dfut3"},
      {"pill_preference", {"dpil1", "dpil2", "dpil3"}, "dpil2"},
      {"weight_concern", {"dwt1", "dwt2"}, "dwt2"},
      {"compliance", {"dcomp1", "dcomp2"}, "dcomp1"},
      {"income", {"dpay1", "dpay2", "dpay3"}, "dpay1"},
      {"smoking", {"dsmk1", "dsmk2", "dsmk3"}, "dsmk1"},
  };
  return cb;
}

const ReferenceParameterSet& reference_parameter_set() {
  static const ReferenceParameterSet set = build();
  return set;
}

}  // namespace mvp
