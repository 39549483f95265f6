#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tsclust/core.hpp"
#include "tsclust/exp_model.hpp"
#include "tsclust/hardness.hpp"
#include "tsclust/hmm.hpp"
#include "tsclust/similarity.hpp"

namespace tsclust {

/// All floating-point output uses 12 significant digits so repeated runs
/// diff byte-for-byte.
std::string format_double(double v);

/// Panel CSV: header "time,s1,...,sn", one row per step, time 1-based.
void write_panel_csv(const std::string& path, const SeriesPanel& panel);
SeriesPanel read_panel_csv(const std::string& path);

/// Timeline CSV: header "time,partition" with canonical 1-based partition
/// strings ("1,2|3"). The partition field is everything after the first
/// comma of the row.
void write_timeline_csv(const std::string& path, const ClusterTimeline& timeline);
ClusterTimeline read_timeline_csv(const std::string& path);

/// Model parameters CSV: header "i,j,rate1,rate0,prior1", 1-based pairs,
/// i < j in lexicographic order.
void write_params_csv(const std::string& path, const ExpModelParams& params);
ExpModelParams read_params_csv(const std::string& path);

/// Weights CSV: header "series,weight", series 1-based.
void write_weights_csv(const std::string& path, const std::vector<double>& weights);

/// Similarity matrix CSV: header row of series ids, then the n rows.
void write_similarity_csv(const std::string& path, const SimilarityMatrix& s);

/// HMM files under a shared prefix: <prefix>_states.csv
/// (state,initial,partition — the partition string is everything after the
/// second comma), <prefix>_transition.csv (from, then one column per
/// destination state), <prefix>_emission.csv (parameter CSV).
void write_hmm(const std::string& prefix, const ClusterHmm& hmm);
ClusterHmm read_hmm(const std::string& prefix);

SimpleGraph read_edge_list_file(const std::string& path);

} // namespace tsclust
