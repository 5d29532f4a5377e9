#include "psps/table_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace psps {

namespace {

constexpr char kMagic[8] = {'P', 'S', 'P', 'S', 'T', 'B', 'L', '1'};
constexpr int kVersion = 1;

static_assert(sizeof(double) == 8);

void write_artifact(const std::string& path, nlohmann::ordered_json header,
                    const std::vector<std::pair<std::string, std::span<const double>>>& blocks) {
    nlohmann::ordered_json payload = nlohmann::ordered_json::array();
    for (const auto& [name, data] : blocks)
        payload.push_back({{"name", name}, {"count", data.size()}});
    header["version"] = kVersion;
    header["payload"] = std::move(payload);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    std::string head = header.dump();
    if (head.size() > UINT32_MAX) throw std::runtime_error("artifact header too large");
    std::uint32_t len = static_cast<std::uint32_t>(head.size());
    unsigned char len_le[4] = {static_cast<unsigned char>(len & 0xff),
                               static_cast<unsigned char>((len >> 8) & 0xff),
                               static_cast<unsigned char>((len >> 16) & 0xff),
                               static_cast<unsigned char>((len >> 24) & 0xff)};
    out.write(kMagic, sizeof(kMagic));
    out.write(reinterpret_cast<const char*>(len_le), 4);
    out.write(head.data(), static_cast<std::streamsize>(head.size()));
    for (const auto& [name, data] : blocks)
        out.write(reinterpret_cast<const char*>(data.data()),
                  static_cast<std::streamsize>(data.size() * sizeof(double)));
    if (!out) throw std::runtime_error("short write to " + path);
}

struct Artifact {
    nlohmann::json header;
    std::map<std::string, std::vector<double>> blocks;
};

nlohmann::json read_header(std::ifstream& in, const std::string& path) {
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw std::runtime_error(path + ": not a policy artifact");
    unsigned char len_le[4];
    in.read(reinterpret_cast<char*>(len_le), 4);
    if (!in) throw std::runtime_error(path + ": truncated header");
    std::uint32_t len = static_cast<std::uint32_t>(len_le[0]) |
                        (static_cast<std::uint32_t>(len_le[1]) << 8) |
                        (static_cast<std::uint32_t>(len_le[2]) << 16) |
                        (static_cast<std::uint32_t>(len_le[3]) << 24);
    std::string head(len, '\0');
    in.read(head.data(), static_cast<std::streamsize>(len));
    if (!in) throw std::runtime_error(path + ": truncated header");
    nlohmann::json header = nlohmann::json::parse(head, nullptr, false);
    if (header.is_discarded()) throw std::runtime_error(path + ": malformed artifact header");
    if (header.value("version", -1) != kVersion)
        throw std::runtime_error(path + ": unsupported artifact version");
    return header;
}

Artifact read_artifact(const std::string& path, const std::string& expected_kind) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    Artifact art;
    art.header = read_header(in, path);
    std::string kind = art.header.value("kind", "");
    if (kind != expected_kind)
        throw std::runtime_error(path + ": artifact holds '" + kind + "', expected '" +
                                 expected_kind + "'");
    for (const auto& block : art.header.at("payload")) {
        std::string name = block.at("name").get<std::string>();
        std::size_t count = block.at("count").get<std::size_t>();
        std::vector<double> data(count);
        in.read(reinterpret_cast<char*>(data.data()),
                static_cast<std::streamsize>(count * sizeof(double)));
        if (!in) throw std::runtime_error(path + ": truncated payload block " + name);
        art.blocks.emplace(std::move(name), std::move(data));
    }
    return art;
}

const std::vector<double>& block(const Artifact& art, const std::string& name,
                                 const std::string& path) {
    auto it = art.blocks.find(name);
    if (it == art.blocks.end())
        throw std::runtime_error(path + ": missing payload block " + name);
    return it->second;
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

nlohmann::ordered_json state_space_to_json(const StateSpace& space) {
    nlohmann::ordered_json j;
    j["phenomena"] = nlohmann::ordered_json::array();
    for (const auto& p : space.phenomena())
        j["phenomena"].push_back(
            {{"name", p.name}, {"unit", p.unit}, {"bin_edges", p.bin_edges}});
    j["day_type_count"] = space.day_type_count();
    return j;
}

StateSpace state_space_from_json(const nlohmann::json& j) {
    std::vector<Phenomenon> phenomena;
    for (const auto& pj : j.at("phenomena")) {
        Phenomenon p;
        p.name = pj.at("name").get<std::string>();
        p.unit = pj.at("unit").get<std::string>();
        p.bin_edges = pj.at("bin_edges").get<std::vector<double>>();
        phenomena.push_back(std::move(p));
    }
    return StateSpace(std::move(phenomena), j.value("day_type_count", 1));
}

void save_transitions(const std::string& path, const TransitionModel& model) {
    nlohmann::ordered_json header;
    header["kind"] = "transitions";
    header["n_states"] = model.size();
    header["smoothing"] = model.smoothing();
    // row-major so the header's row/column convention matches the file order
    Eigen::MatrixXd rm = model.matrix().transpose();
    std::span<const double> data(rm.data(), static_cast<std::size_t>(rm.size()));
    write_artifact(path, std::move(header), {{"matrix", data}});
}

TransitionModel load_transitions(const std::string& path) {
    Artifact art = read_artifact(path, "transitions");
    std::size_t n = art.header.at("n_states").get<std::size_t>();
    const auto& data = block(art, "matrix", path);
    if (data.size() != n * n) throw std::runtime_error(path + ": matrix size mismatch");
    Eigen::MatrixXd P(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            P(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = data[i * n + j];
    return TransitionModel(std::move(P), art.header.value("smoothing", 0.0));
}

void save_table(const std::string& path, const PolicyTableS1& table) {
    nlohmann::ordered_json header;
    header["kind"] = "s1";
    header["horizon"] = table.horizon();
    header["budget"] = table.budget();
    header["n_states"] = table.n_states();
    nlohmann::ordered_json costs;
    to_json(costs, table.costs());
    header["costs"] = std::move(costs);
    std::span<const double> wrp(table.wrp().data(),
                                static_cast<std::size_t>(table.wrp().size()));
    write_artifact(path, std::move(header), {{"wrp", wrp}, {"values", table.values()}});
}

PolicyTableS1 load_table_s1(const std::string& path) {
    Artifact art = read_artifact(path, "s1");
    int T = art.header.at("horizon").get<int>();
    int N = art.header.at("budget").get<int>();
    CostSchedule costs = art.header.at("costs").get<CostSchedule>();
    return PolicyTableS1(T, N, std::move(costs), to_vector(block(art, "wrp", path)),
                         block(art, "values", path));
}

void save_table(const std::string& path, const PolicyTableS2& table) {
    nlohmann::ordered_json header;
    header["kind"] = "s2";
    header["horizon"] = table.horizon();
    header["n_states"] = table.n_states();
    nlohmann::ordered_json costs;
    to_json(costs, table.costs());
    header["costs"] = std::move(costs);
    std::span<const double> wrp(table.wrp().data(),
                                static_cast<std::size_t>(table.wrp().size()));
    write_artifact(path, std::move(header), {{"wrp", wrp}, {"values", table.values()}});
}

PolicyTableS2 load_table_s2(const std::string& path) {
    Artifact art = read_artifact(path, "s2");
    int T = art.header.at("horizon").get<int>();
    CostSchedule costs = art.header.at("costs").get<CostSchedule>();
    return PolicyTableS2(T, std::move(costs), to_vector(block(art, "wrp", path)),
                         block(art, "values", path));
}

void save_table(const std::string& path, const PolicyTableCpp& table) {
    nlohmann::ordered_json header;
    header["kind"] = "cpp";
    header["horizon"] = table.horizon();
    header["budget"] = table.budget();
    header["n_states"] = table.n_states();
    header["y"] = table.params().y;
    header["abar"] = table.params().abar;
    header["b2"] = table.quad().b2;
    header["c1"] = table.quad().c1;
    header["d0"] = table.quad().d0;
    std::span<const double> demand(table.demand().data(),
                                   static_cast<std::size_t>(table.demand().size()));
    std::span<const double> mq(table.mean_next_demand().data(),
                               static_cast<std::size_t>(table.mean_next_demand().size()));
    write_artifact(path, std::move(header),
                   {{"demand", demand}, {"mean_next_demand", mq}, {"values", table.values()}});
}

PolicyTableCpp load_table_cpp(const std::string& path) {
    Artifact art = read_artifact(path, "cpp");
    int T = art.header.at("horizon").get<int>();
    CppParams params;
    params.budget = art.header.at("budget").get<int>();
    params.y = art.header.at("y").get<double>();
    params.abar = art.header.at("abar").get<std::vector<double>>();
    QuadCost quad;
    quad.b2 = art.header.at("b2").get<std::vector<double>>();
    quad.c1 = art.header.at("c1").get<std::vector<double>>();
    quad.d0 = art.header.at("d0").get<std::vector<double>>();
    return PolicyTableCpp(T, std::move(params), std::move(quad),
                          to_vector(block(art, "demand", path)),
                          to_vector(block(art, "mean_next_demand", path)),
                          block(art, "values", path));
}

std::string artifact_kind(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_header(in, path).value("kind", "");
}

}  // namespace psps
