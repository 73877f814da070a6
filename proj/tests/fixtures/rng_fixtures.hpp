// Generated by make_rng_fixtures.py. Do not edit.
#ifndef FFDD_TESTS_RNG_FIXTURES_HPP
#define FFDD_TESTS_RNG_FIXTURES_HPP

namespace ffdd::test {

// seed 42: four uniforms, then four normals from the same stream
inline constexpr double kSeed42Uniforms[] = {0.755155532954539, 0.6390313938546974, 0.7521452007480266, 0.13627268363243705};
inline constexpr double kSeed42Normals[] = {1.7947316657951717, -0.912125155644141, -0.6173083500341446, -0.15611333502489516};

}  // namespace ffdd::test

#endif  // FFDD_TESTS_RNG_FIXTURES_HPP
