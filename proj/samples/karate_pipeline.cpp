// Embed Karate with QWalkVec and score it with the classification protocol.
//   karate_pipeline [edges] [labels]

#include <cstdio>
#include <iostream>

#include "qwalkvec/cli.hpp"
#include "qwalkvec/embed.hpp"
#include "qwalkvec/protocol.hpp"

int main(int argc, char** argv) {
  using namespace qwalkvec;
  std::string edges = argc > 1 ? argv[1] : QWALKVEC_DATA_DIR "/karate.edges";
  std::string labels_path = argc > 2 ? argv[2] : QWALKVEC_DATA_DIR "/karate.labels";
  try {
    auto g = load_edge_list(cli::read_file(edges));
    auto labels = load_labels(cli::read_file(labels_path), g);

    EmbedDiagnostics diag;
    auto phi = qwalkvec::qwalkvec(g, WalkParams{0.25, 1.0, 400}, 1, &diag);
    std::printf("N=%zu t=%zu sources=%zu max norm drift=%.2e\n", phi.rows, phi.cols, diag.sources,
                diag.max_norm_drift);

    for (double tr : {0.5, 0.8}) {
      auto row = evaluate_protocol(phi, labels, SplitSpec{tr, 20, 42});
      std::printf("T_R=%.1f micro=%.3f+-%.3f macro=%.3f+-%.3f\n", tr, row.micro_mean, row.micro_std, row.macro_mean,
                  row.macro_std);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
