#include "tsclust/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tsclust {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ContractError("cannot open for writing: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ContractError("cannot open for reading: " + path);
    return in;
}

double parse_double(const std::string& token, const std::string& path) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(token, &pos);
    } catch (const std::exception&) {
        throw ContractError(path + ": bad number '" + token + "'");
    }
    if (pos != token.size()) throw ContractError(path + ": bad number '" + token + "'");
    return v;
}

long parse_long(const std::string& token, const std::string& path) {
    std::size_t pos = 0;
    long v;
    try {
        v = std::stol(token, &pos);
    } catch (const std::exception&) {
        throw ContractError(path + ": bad integer '" + token + "'");
    }
    if (pos != token.size()) throw ContractError(path + ": bad integer '" + token + "'");
    return v;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(field);
            field.clear();
        } else if (ch != '\r') {
            field += ch;
        }
    }
    fields.push_back(field);
    return fields;
}

} // namespace

void write_panel_csv(const std::string& path, const SeriesPanel& panel) {
    auto out = open_out(path);
    out << "time";
    for (int s = 0; s < panel.n_series(); ++s) out << ",s" << s + 1;
    out << "\n";
    for (int t = 0; t < panel.n_steps(); ++t) {
        out << t + 1;
        for (int s = 0; s < panel.n_series(); ++s) out << ',' << format_double(panel.at(t, s));
        out << "\n";
    }
}

SeriesPanel read_panel_csv(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw ContractError(path + ": empty panel file");
    const auto header = split_csv(line);
    if (header.size() < 3 || header[0] != "time")
        throw ContractError(path + ": expected header time,s1,...");
    const int n = static_cast<int>(header.size()) - 1;
    std::vector<double> values;
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (static_cast<int>(fields.size()) != n + 1)
            throw ContractError(path + ": row with wrong field count");
        for (int s = 0; s < n; ++s) values.push_back(parse_double(fields[s + 1], path));
        ++rows;
    }
    if (rows == 0) throw ContractError(path + ": no data rows");
    return SeriesPanel(n, rows, values);
}

void write_timeline_csv(const std::string& path, const ClusterTimeline& timeline) {
    auto out = open_out(path);
    out << "time,partition\n";
    for (const auto& [k, p] : timeline.steps()) out << k << ',' << p.to_string() << "\n";
}

ClusterTimeline read_timeline_csv(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw ContractError(path + ": empty timeline file");
    ClusterTimeline timeline;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ContractError(path + ": timeline row without partition");
        const int k = static_cast<int>(parse_long(line.substr(0, comma), path));
        timeline.append(k, Partition::parse(line.substr(comma + 1)));
    }
    if (timeline.empty()) throw ContractError(path + ": no timeline rows");
    return timeline;
}

void write_params_csv(const std::string& path, const ExpModelParams& params) {
    auto out = open_out(path);
    out << "i,j,rate1,rate0,prior1\n";
    for (int i = 0; i < params.n(); ++i)
        for (int j = i + 1; j < params.n(); ++j)
            out << i + 1 << ',' << j + 1 << ',' << format_double(params.rate1(i, j)) << ','
                << format_double(params.rate0(i, j)) << ','
                << format_double(params.prior1(i, j)) << "\n";
}

ExpModelParams read_params_csv(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw ContractError(path + ": empty parameter file");
    struct Row {
        int i, j;
        double r1, r0, p1;
    };
    std::vector<Row> rows;
    int n = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != 5) throw ContractError(path + ": parameter row needs 5 fields");
        Row row;
        row.i = static_cast<int>(parse_long(fields[0], path)) - 1;
        row.j = static_cast<int>(parse_long(fields[1], path)) - 1;
        row.r1 = parse_double(fields[2], path);
        row.r0 = parse_double(fields[3], path);
        row.p1 = parse_double(fields[4], path);
        n = std::max({n, row.i + 1, row.j + 1});
        rows.push_back(row);
    }
    if (rows.empty()) throw ContractError(path + ": no parameter rows");
    ExpModelParams params(n);
    std::vector<bool> seen(static_cast<std::size_t>(n) * (n - 1) / 2, false);
    for (const Row& row : rows) {
        params.set_pair(row.i, row.j, row.r1, row.r0, row.p1);
        seen[pair_index(row.i, row.j)] = true;
    }
    for (bool b : seen)
        if (!b) throw ContractError(path + ": missing parameter pairs");
    return params;
}

void write_weights_csv(const std::string& path, const std::vector<double>& weights) {
    auto out = open_out(path);
    out << "series,weight\n";
    for (std::size_t s = 0; s < weights.size(); ++s)
        out << s + 1 << ',' << format_double(weights[s]) << "\n";
}

void write_similarity_csv(const std::string& path, const SimilarityMatrix& s) {
    auto out = open_out(path);
    for (int i = 0; i < s.n(); ++i) {
        if (i) out << ',';
        out << 's' << i + 1;
    }
    out << "\n";
    for (int i = 0; i < s.n(); ++i) {
        for (int j = 0; j < s.n(); ++j) {
            if (j) out << ',';
            out << format_double(s.at(i, j));
        }
        out << "\n";
    }
}

void write_hmm(const std::string& prefix, const ClusterHmm& hmm) {
    {
        auto out = open_out(prefix + "_states.csv");
        // The partition field contains commas, so it goes last and readers
        // take everything after the second comma.
        out << "state,initial,partition\n";
        for (int i = 0; i < hmm.state_count(); ++i)
            out << i << ',' << format_double(std::exp(hmm.log_initial()[i])) << ','
                << hmm.states()[i].to_string() << "\n";
    }
    {
        auto out = open_out(prefix + "_transition.csv");
        out << "from";
        for (int j = 0; j < hmm.state_count(); ++j) out << ",to" << j;
        out << "\n";
        for (int i = 0; i < hmm.state_count(); ++i) {
            out << i;
            for (int j = 0; j < hmm.state_count(); ++j)
                out << ',' << format_double(std::exp(hmm.log_transition()(i, j)));
            out << "\n";
        }
    }
    write_params_csv(prefix + "_emission.csv", hmm.emission());
}

ClusterHmm read_hmm(const std::string& prefix) {
    const std::string states_path = prefix + "_states.csv";
    auto states_in = open_in(states_path);
    std::string line;
    if (!std::getline(states_in, line)) throw ContractError(states_path + ": empty");
    std::vector<double> initial;
    std::vector<Partition> states;
    while (std::getline(states_in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto first = line.find(',');
        const auto second = first == std::string::npos ? first : line.find(',', first + 1);
        if (second == std::string::npos)
            throw ContractError(states_path + ": row needs state,initial,partition");
        initial.push_back(parse_double(line.substr(first + 1, second - first - 1), states_path));
        states.push_back(Partition::parse(line.substr(second + 1)));
    }
    if (states.empty()) throw ContractError(states_path + ": no states");
    const int n = states.front().n();
    const std::vector<Partition> expected = all_partitions(n);
    if (states.size() != expected.size())
        throw ContractError(states_path + ": state count is not Bell(n)");
    for (std::size_t i = 0; i < states.size(); ++i)
        if (!(states[i] == expected[i]))
            throw ContractError(states_path + ": states out of canonical order");

    const std::string trans_path = prefix + "_transition.csv";
    auto trans_in = open_in(trans_path);
    if (!std::getline(trans_in, line)) throw ContractError(trans_path + ": empty");
    const int b = static_cast<int>(states.size());
    Matrix log_transition(b, b);
    int row_count = 0;
    while (std::getline(trans_in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (static_cast<int>(fields.size()) != b + 1)
            throw ContractError(trans_path + ": row with wrong field count");
        if (row_count >= b) throw ContractError(trans_path + ": too many rows");
        for (int j = 0; j < b; ++j)
            log_transition(row_count, j) = std::log(parse_double(fields[j + 1], trans_path));
        ++row_count;
    }
    if (row_count != b) throw ContractError(trans_path + ": missing rows");

    std::vector<double> log_initial(b);
    for (int i = 0; i < b; ++i) log_initial[i] = std::log(initial[i]);

    return ClusterHmm::create(n, std::move(log_transition), std::move(log_initial),
                              read_params_csv(prefix + "_emission.csv"));
}

SimpleGraph read_edge_list_file(const std::string& path) {
    auto in = open_in(path);
    return parse_edge_list(in, path);
}

} // namespace tsclust
