#include <iostream>

#include "consortia/cluster.hpp"
#include "consortia/synth.hpp"

int main() {
  consortia::SynthSpec spec;
  spec.planted.push_back(consortia::PlantedSpec{20, 0.1, 5});
  const auto result = consortia::generate_corpus(spec);
  const auto found = consortia::cluster_consortia(result.corpus, consortia::ClusterParams{});
  std::cout << found.size() << " consortium of " << (found.empty() ? 0 : found[0].size()) << '\n';
  return found.size() == 1 && found[0].size() == 5 ? 0 : 1;
}
