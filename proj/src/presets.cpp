#include "subheat/harness.hpp"

#include "subheat/errors.hpp"
#include "subheat/numerics.hpp"
#include "subheat/parser.hpp"

namespace subheat {

namespace {

std::shared_ptr<VectorFieldSystem> make_system(const std::string& text) {
  return std::make_shared<VectorFieldSystem>(parse_system_text(text));
}

Preset make_euclidean_1d() {
  Preset p;
  p.name = "euclidean-1d";
  p.system = make_system("weights 1\n1\n");
  p.sim_grid = GridSpec({-12.0}, {12.0}, {257});
  p.kernel_grid = GridSpec({-8.0}, {8.0}, {257});
  p.decay_grid = GridSpec({-12.0}, {12.0}, {257});
  p.decay_times = geomspace(0.5, 5.0, 9);
  p.cc_grid = GridSpec({-2.0}, {2.0}, {257});
  p.cc_radii = geomspace(0.1, 1.0, 6);
  return p;
}

Preset make_euclidean_2d() {
  Preset p;
  p.name = "euclidean-2d";
  p.system = make_system("weights 1 1\n1 ; 0\n0 ; 1\n");
  p.sim_grid = GridSpec({-6.4, -6.4}, {6.4, 6.4}, {65, 65});
  p.kernel_grid = GridSpec({-3.2, -3.2}, {3.2, 3.2}, {129, 129});
  p.decay_grid = GridSpec({-9.0, -9.0}, {9.0, 9.0}, {161, 161});
  p.decay_times = geomspace(0.5, 3.0, 8);
  p.cc_grid = GridSpec({-1.6, -1.6}, {1.6, 1.6}, {129, 129});
  p.cc_radii = geomspace(0.1, 1.0, 8);
  return p;
}

Preset make_grushin_1() {
  Preset p;
  p.name = "grushin-1";
  p.system = make_system("weights 1 2\n1 ; 0\n0 ; x1\n");
  p.sim_grid = GridSpec({-6.4, -6.4}, {6.4, 6.4}, {65, 65});
  p.kernel_grid = GridSpec({-3.2, -2.0}, {3.2, 2.0}, {128, 128});
  p.decay_grid = GridSpec({-9.0, -15.0}, {9.0, 15.0}, {129, 241});
  p.decay_times = geomspace(0.5, 3.0, 8);
  p.cc_grid = GridSpec({-5.0, -8.5}, {5.0, 8.5}, {85, 425});
  p.cc_radii = geomspace(0.4, 4.0, 9);
  p.cc_scaling_grid = GridSpec({-5.0, -7.0}, {5.0, 7.0}, {85, 299});
  return p;
}

Preset make_grushin_2() {
  Preset p;
  p.name = "grushin-2";
  p.system = make_system("weights 1 3\n1 ; 0\n0 ; x1^2\n");
  p.sim_grid = GridSpec({-6.4, -6.4}, {6.4, 6.4}, {65, 65});
  p.kernel_grid = GridSpec({-3.2, -2.6}, {3.2, 2.6}, {97, 161});
  p.decay_grid = GridSpec({-4.2, -13.0}, {4.2, 13.0}, {81, 291});
  p.decay_times = geomspace(0.6, 1.8, 7);
  p.cc_grid = GridSpec({-6.0, -31.0}, {6.0, 31.0}, {103, 183});
  p.cc_radii = geomspace(2.2, 4.4, 6);
  return p;
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"euclidean-1d", "euclidean-2d", "grushin-1",
                                              "grushin-2"};
  return names;
}

Preset resolve_preset(const std::string& name) {
  if (name == "euclidean-1d") return make_euclidean_1d();
  if (name == "euclidean-2d") return make_euclidean_2d();
  if (name == "grushin-1") return make_grushin_1();
  if (name == "grushin-2") return make_grushin_2();
  throw ValidationError("unknown preset '" + name +
                        "' (catalog: euclidean-1d, euclidean-2d, grushin-1, grushin-2)");
}

}  // namespace subheat
