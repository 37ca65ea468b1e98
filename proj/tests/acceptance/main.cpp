#include <CLI11.hpp>

#include <iostream>

#include "acceptance.hpp"

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  sgg::acceptance::Options opts;
  app.add_flag("--slow", opts.slow, "include the 6072-vertex digraph");
  app.add_option("--only", opts.only, "criterion numbers to run");
  CLI11_PARSE(app, argc, argv);
  auto results = sgg::acceptance::run(opts, [](const auto& r) { std::cout << sgg::acceptance::format(r) << std::endl; });
  bool ok = true;
  for (const auto& r : results) ok = ok && r.pass;
  return ok ? 0 : 1;
}
