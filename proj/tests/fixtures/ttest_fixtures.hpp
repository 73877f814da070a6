// Generated by make_ttest_fixtures.py; do not edit.
#ifndef FFDD_TESTS_TTEST_FIXTURES_HPP
#define FFDD_TESTS_TTEST_FIXTURES_HPP

#include <vector>

namespace ffdd::test {

struct TTestFixture {
  std::vector<double> a;
  std::vector<double> b;
  double pooled_t;
  double pooled_p;
  double welch_t;
  double welch_df;
  double welch_p;
};

inline const std::vector<TTestFixture> kTTestFixtures = {
    {{0.433122, 0.446189, 0.498417},
     {0.528446, 0.480166, 0.401923},
     -0.26090378371430927508,
     0.80704845335930827346,
     -0.26090378371430927508,
     3.0786899979991295448,
     0.81064953733291784102},
    {{0.481592, 0.531279, 0.452967, 0.403226, 0.511369, 0.511264, 0.473496, 0.532817, 0.474589, 0.481112, 0.543631, 0.508613, 0.504006},
     {0.562133, 0.490433, 0.537467, 0.588781, 0.508556, 0.513984, 0.471947, 0.607937, 0.482281, 0.521691, 0.598748, 0.58125, 0.497981, 0.486616, 0.555386, 0.551111, 0.466593},
     -2.3900424293133824403,
     0.023817382663554593359,
     -2.4539391922625206314,
     27.802141098234295164,
     0.020659917611844049666},
    {{0.569922, 0.46982, 0.530765, 0.432667, 0.468192, 0.531354, 0.574916, 0.480296, 0.481394, 0.512439, 0.431595, 0.540406, 0.449845},
     {0.689679, 0.650578, 0.64544, 0.592776, 0.583589, 0.560333, 0.536995, 0.58182, 0.521574, 0.559847, 0.470161, 0.638439, 0.576377, 0.48181, 0.568069, 0.600498, 0.647185},
     -4.1433805664015304486,
     0.00028576096966769934328,
     -4.2618759329055743712,
     27.861156004858940917,
     0.00020920314838184351546},
    {{0.52206, 0.340555, 0.472703, 0.513708, 0.523261},
     {0.689381, 0.863805, 0.747813, 0.859101, 0.737725, 0.794404, 0.869744, 0.733176, 0.81995},
     -8.0496767093625152635,
     3.5288045922406871261e-6,
     -7.6731346505459868741,
     7.3144685444618933339,
     0.000094678469694870351933},
    {{0.484361, 0.485561},
     {0.537436, 0.47632},
     -0.71708804386651087699,
     0.54775762597981822137,
     -0.71708804386651087699,
     1.000771050066154507,
     0.60388229607327723403},
    {{0.477491, 0.509092, 0.515623, 0.508337, 0.429003, 0.503081, 0.494258, 0.485043, 0.498116, 0.508418, 0.52364, 0.478707, 0.507904, 0.498146, 0.460378, 0.514165, 0.509949, 0.46393, 0.508977, 0.477474},
     {0.467471, 0.435526, 0.448778, 0.446561, 0.442379, 0.420737, 0.400661, 0.550149, 0.358547, 0.510336, 0.433856, 0.438712, 0.406557, 0.420265, 0.466961, 0.438772, 0.501636, 0.448484, 0.379562, 0.461251},
     4.4815441278772769703,
     0.000066060960816122751587,
     4.4815441278772769703,
     28.933944231508354672,
     0.00010730974696811662671},
    {{0.420826, 0.750872, 0.338472, 0.595404},
     {0.592499, 0.562404, 0.565864, 0.620125, 0.594209, 0.659402, 0.523565, 0.630948, 0.588306, 0.528172, 0.551843, 0.531941, 0.586126, 0.581013, 0.605347, 0.539802, 0.540748, 0.561079, 0.535651, 0.646144, 0.463896, 0.560145, 0.511069, 0.56837, 0.614292, 0.494738, 0.60038, 0.483734, 0.516198, 0.605628},
     -1.0132659311248250803,
     0.31853371101986551337,
     -0.42258989621503911175,
     3.0541563968194394016,
     0.70058643179128159336},
    {{0.559407, 0.511839, 0.549186, 0.517385, 0.481199, 0.58585, 0.487955, 0.425738, 0.493107, 0.531082},
     {0.496938, 0.589708, 0.567953, 0.518421, 0.483223, 0.484478, 0.508848, 0.382082, 0.514008, 0.518996, 0.518742},
     0.30950052083354824546,
     0.76030945455166409997,
     0.31172862225338997777,
     18.963916503275790381,
     0.75864797948445895379},
    {{0.459652, 0.421311, 0.501528, 0.508971, 0.452497, 0.532121, 0.53819},
     {0.93173, 0.966022, 0.920924, 0.93081, 0.882886, 1.012876},
     -18.481858016048053722,
     1.2443657166145110138e-9,
     -18.474202225086754964,
     10.678708153868666239,
     1.8969254496356473848e-9},
    {{0.476827, 0.516757, 0.485364, 0.445877, 0.511731, 0.379051, 0.620256, 0.384887, 0.488811, 0.543895, 0.415799, 0.481513, 0.385082, 0.435068, 0.408914, 0.611732, 0.433228, 0.421595, 0.60791, 0.506878, 0.609833, 0.603014, 0.642799, 0.503444, 0.466287},
     {0.426061, 0.437121, 0.377684, 0.585608, 0.431385, 0.554129, 0.484323, 0.524651, 0.48339, 0.476287, 0.513693, 0.45235, 0.393786, 0.578697, 0.51439, 0.539439, 0.54572, 0.404801},
     0.46767329507483406113,
     0.64249463213469649477,
     0.48669345635132686547,
     40.651143908468880035,
     0.62908943955014326715},
};

}  // namespace ffdd::test

#endif  // FFDD_TESTS_TTEST_FIXTURES_HPP
