// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "supereig/error.hpp"
#include "supereig/experiment.hpp"

namespace {

using namespace supereig;

std::vector<ElementKind> parse_elements(const std::string& csv) {
  std::vector<ElementKind> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_element_kind(item));
  if (out.empty()) throw Error("--element: at least one element kind required");
  return out;
}

PostOptions parse_post(const std::string& csv) {
  PostOptions post;
  if (csv.empty()) return post;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "rea") {
      post.rea = true;
    } else if (item == "cea") {
      post.cea = true;
    } else if (item == "exp") {
      post.exp = true;
    } else {
      throw Error("--post: unknown option '" + item + "' (expected rea, cea, exp)");
    }
  }
  return post;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Eigenvalue benchmarks for nonconforming elements"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run a benchmark example");
  int example = 1, levels = 5, k = 1;
  std::string element = "cr", post, format = "csv", out_dir = ".";
  run->add_option("--example", example, "Example id (1-4)")->check(CLI::Range(1, 4));
  run->add_option("--element", element, "Element kinds, comma separated (cr, ecr, p1)");
  run->add_option("--levels", levels, "Finest refinement level");
  run->add_option("--k", k, "Number of eigenpairs");
  run->add_option("--post", post, "Postprocessing, comma separated (rea, cea, exp)");
  run->add_option("--format", format, "Report format (csv or json)");
  run->add_option("--out", out_dir, "Output directory");

  auto* mesh = app.add_subcommand("mesh", "Export a benchmark mesh");
  std::string domain = "unit-square", mesh_out = "mesh.txt";
  int mesh_level = 1;
  mesh->add_option("--domain", domain,
                   "Domain kind (unit-square, perturbed-square, equilateral-triangle, l-shape)");
  mesh->add_option("--level", mesh_level, "Refinement level");
  mesh->add_option("--out", mesh_out, "Output path");

  auto* matrix = app.add_subcommand("matrix", "Export an assembled matrix in coordinate format");
  std::string mat_domain = "unit-square", mat_element = "cr", mat_kind = "stiffness",
              mat_out = "matrix.txt";
  int mat_level = 2;
  matrix->add_option("--domain", mat_domain, "Domain kind");
  matrix->add_option("--level", mat_level, "Refinement level");
  matrix->add_option("--element", mat_element, "Element kind (cr, ecr, p1)");
  matrix->add_option("--kind", mat_kind, "Matrix kind (stiffness or mass)");
  matrix->add_option("--out", mat_out, "Output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    std::cerr << nlohmann::json{{"error", e.what()}}.dump() << "\n";
    return e.get_exit_code();
  }

  if (run->parsed()) {
    ExperimentConfig cfg;
    cfg.example = example;
    cfg.elements = parse_elements(element);
    cfg.levels = levels;
    cfg.k = k;
    cfg.post = parse_post(post);
    cfg.format = format;
    cfg.out_dir = out_dir;
    const ExperimentResult res = run_experiment(cfg);
    for (const std::string& path : write_reports(res)) std::cout << path << "\n";
    if (res.truncated)
      std::cerr << "note: levels truncated to " << res.config.levels
                << " by the DOF ceiling\n";
  } else if (mesh->parsed()) {
    const Triangulation t = build_domain(parse_domain_kind(domain), mesh_level);
    std::ofstream os(mesh_out);
    if (!os) throw Error("cannot open " + mesh_out);
    write_mesh(os, t);
    std::cout << mesh_out << "\n";
  } else if (matrix->parsed()) {
    const Triangulation t = build_domain(parse_domain_kind(mat_domain), mat_level);
    const DofMap dm =
        build_dofmap(t, parse_element_kind(mat_element), BoundaryConditions::all_dirichlet(t.domain));
    SparseSystem sys;
    if (mat_kind == "stiffness") {
      sys = assemble_stiffness(t, dm);
    } else if (mat_kind == "mass") {
      sys = assemble_mass(t, dm);
    } else {
      throw Error("--kind: expected stiffness or mass");
    }
    std::ofstream os(mat_out);
    if (!os) throw Error("cannot open " + mat_out);
    write_matrix_coordinate(os, sys);
    std::cout << mat_out << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", e.what()}}.dump() << "\n";
    return 1;
  }
}
