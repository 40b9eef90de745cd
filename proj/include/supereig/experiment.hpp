// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "supereig/estimators.hpp"
#include "supereig/solver.hpp"

namespace supereig {

struct PostOptions {
  bool rea = false;
  bool cea = false;
  bool exp = false;
};

struct ExperimentConfig {
  int example = 1;
  std::vector<ElementKind> elements = {ElementKind::CR};
  int levels = 5;  // finest level of the family
  int k = 1;       // eigenpair count
  PostOptions post;
  std::string format = "csv";
  std::string out_dir = ".";
};

/// Domain, boundary conditions and reference eigenvalues of a benchmark
/// example. Reference entries may be NaN (unknown).
struct ExampleSetup {
  int id = 0;
  DomainKind domain = DomainKind::UnitSquare;
  BoundaryConditions bc;
  std::vector<double> reference;
  std::vector<bool> reference_exact;  // false: computed fallback, non-authoritative
  // Mesh-level offset of reported level 1: the triangle and L-shape benchmark
  // levels correspond to meshes refined one step further than their index.
  int level_offset = 0;

  static ExampleSetup make(int id, int k, int levels);
};

struct LevelResult {
  int level = 0;
  double h = 0.0;  // maximum edge length
  int n_dofs = 0;
  std::vector<double> lambda;
  std::vector<EstimatorReport> rea;  // empty unless requested
  std::vector<double> lambda_cea;    // CR only
  std::vector<double> lambda_p1star; // CR only
  std::vector<double> lambda_exp;    // empty on the coarsest level
};

struct ElementResults {
  ElementKind kind = ElementKind::CR;
  std::vector<LevelResult> levels;
};

struct ExperimentResult {
  ExperimentConfig config;
  ExampleSetup setup;
  std::vector<ElementResults> per_element;
  // Example 1 only: extrapolation study on the nonuniform perturbed-square
  // family, present when extrapolation is requested.
  std::vector<ElementResults> nonuniform;
  bool truncated = false;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Rates log2(|e_{l-1}| / |e_l|); NaN marks the first entry and any level
/// whose error vanishes.
std::vector<double> observed_orders(const std::vector<double>& errors);

/// Writes report files into cfg.out_dir; returns the paths written.
std::vector<std::string> write_reports(const ExperimentResult& r);

/// Full pipeline for one (mesh, element) pair, reused by tests.
struct PipelineOptions {
  int k = 1;
  bool rea = false;
  bool cea = false;
};

LevelResult run_level(const Triangulation& t, ElementKind kind, const BoundaryConditions& bc,
                      const PipelineOptions& opt);

}  // namespace supereig
