#pragma once

// Built-in example catalog: coefficient curves with a declared class and the
// verdict the certifier is expected to give for their selection or lift,
// including low-regularity counterexamples, plus harness mappings.

#include <hyperlift/curvedsl.hpp>
#include <hyperlift/lifting.hpp>
#include <hyperlift/regcheck.hpp>

#include <string>
#include <vector>

namespace hyperlift {

enum class ExampleMode { Select, Lift };

struct CatalogEntry {
  std::string name;
  ExampleMode mode = ExampleMode::Select;
  std::string group;  // "A:n" for selections
  std::string curve;  // comma-separated expressions in t
  Interval domain{-1, 1};
  Smoothness declared;
  Verdict expected = Verdict::Inconclusive;  // floor for positive entries, exact for the others
  bool positive = true;
  std::string lowered_from;  // entry whose class this one undercuts, if any
  std::string note;
};

struct HarnessExample {
  std::string name;
  std::string group;
  BoxMap f;
  std::vector<Probe> probes;
  HarnessVerdict expected = HarnessVerdict::Inconclusive;
  std::string note;
};

const std::vector<CatalogEntry>& list_examples();
const CatalogEntry& find_example(const std::string& name);
CoeffCurve make_curve(const CatalogEntry& entry);

const std::vector<HarnessExample>& harness_examples();
const HarnessExample& find_harness(const std::string& name);

}  // namespace hyperlift
