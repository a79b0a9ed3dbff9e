// Writes one of the built-in inducer configurations as an 8-bit PGM.

#include <CLI11.hpp>

#include <iostream>

#include "illusory/fixtures.hpp"
#include "illusory/io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Write a built-in inducer fixture as PGM"};
  std::string name = "kanizsa";
  int size = 128;
  std::string out;
  app.add_option("--name", name, "kanizsa | disk | ellipse_triangle")
      ->check(CLI::IsMember({"kanizsa", "disk", "ellipse_triangle"}))
      ->capture_default_str();
  app.add_option("--size", size, "Canvas height in pixels")->capture_default_str();
  app.add_option("--out", out, "Output path")->required();
  CLI11_PARSE(app, argc, argv);

  try {
    const auto fixture = illusory::fixtures::by_name(name, size);
    illusory::io::write_pgm(out, illusory::io::mask_to_image(fixture.inducers));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
