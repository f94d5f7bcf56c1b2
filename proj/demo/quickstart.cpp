// Generate a small ABCD-lite graph, run Louvain on it and print how fair the
// result is, both per node (IB_G) and per community group (Φ).

#include <cstdio>

#include "faircd/detectors.hpp"
#include "faircd/group_fairness.hpp"
#include "faircd/individual_bias.hpp"
#include "faircd/quality.hpp"
#include "faircd/synthgen.hpp"

int main() {
  faircd::AbcdParams p;
  p.n = 2000;
  p.c_min = 50;
  p.c_max = 400;
  p.xi = 0.3;
  p.seed = 7;
  const auto sg = faircd::generate_abcd_lite(p);
  const auto pred = faircd::louvain(sg.graph, 7);

  const auto bias = faircd::ib_all_fast(sg.planted, pred);
  const auto q = faircd::quality_scores(sg.graph, sg.planted, pred, faircd::NmiNorm::arithmetic);
  const auto gf = faircd::phi(sg.graph, sg.planted, pred);

  std::printf("graph: %zu nodes, %zu edges, %zu planted communities\n", sg.graph.num_nodes(),
              sg.graph.num_edges(), sg.planted.num_communities());
  std::printf("louvain: %zu communities\n", pred.num_communities());
  std::printf("IB_G %.4f  mean IB %.4f\n", bias.ib_g, bias.mean_ib);
  std::printf("modularity %.4f  NMI %.4f  ARI %.4f  NF1 %.4f\n", q.modularity, q.nmi, q.ari, q.nf1);
  for (auto prop : {faircd::Property::size, faircd::Property::conductance, faircd::Property::density}) {
    const auto v = gf.at(prop, faircd::Score::fccn);
    std::printf("phi_%s^FCCN %s\n", faircd::kPropertyNames[static_cast<int>(prop)].data(),
                v ? std::to_string(*v).c_str() : "missing");
  }
}
