#include "bandit/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "bandit/errors.hpp"

namespace bandit::io {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

void append_header(std::string& out, const Provenance& prov) {
    out += "# config_hash: " + prov.config_hash + "\n";
    out += "# base_seed: " + std::to_string(prov.base_seed) + "\n";
    if (!prov.timestamp.empty()) out += "# generated_at: " + prov.timestamp + "\n";
}

}  // namespace

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
    return buf;
}

std::string batch_csv(const BatchResult& batch, const Provenance& prov) {
    std::string out;
    append_header(out, prov);
    out += "# schedule: " + batch.schedule_desc + "\n";
    out += "# class: " + batch.instance_desc + "\n";
    out += "# horizon: " + std::to_string(batch.horizon) + "\n";

    const std::size_t K = batch.records.empty() ? 0 : batch.records.front().pulls.size();
    out += "rep_id,seed";
    for (std::size_t a = 1; a <= K; ++a) out += ",N_" + std::to_string(a);
    out += ",regret\n";
    for (const auto& rec : batch.records) {
        out += std::to_string(rec.rep_id);
        out += ',';
        out += std::to_string(rec.seed);
        for (std::size_t a = 0; a < K; ++a) {
            out += ',';
            out += std::to_string(rec.pulls[a]);
        }
        out += ',';
        out += fmt_double(rec.regret);
        out += '\n';
    }
    return out;
}

void write_batch_csv(const std::string& path, const BatchResult& batch, const Provenance& prov) {
    write_text(path, batch_csv(batch, prov));
}

std::string trajectory_csv(const BatchResult& batch, const Provenance& prov) {
    std::string out;
    append_header(out, prov);
    out += "rep_id,t,arm,count\n";
    for (const auto& rec : batch.records) {
        for (const auto& cp : rec.trajectory) {
            for (std::size_t a = 0; a < cp.pulls.size(); ++a) {
                out += std::to_string(rec.rep_id);
                out += ',';
                out += std::to_string(cp.t);
                out += ',';
                out += std::to_string(a + 1);
                out += ',';
                out += std::to_string(cp.pulls[a]);
                out += '\n';
            }
        }
    }
    return out;
}

void write_trajectory_csv(const std::string& path, const BatchResult& batch,
                          const Provenance& prov) {
    write_text(path, trajectory_csv(batch, prov));
}

BatchResult read_batch_csv(const std::string& path, std::string* hash_out) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open batch CSV: " + path);

    BatchResult batch;
    std::string line;
    std::size_t K = 0;
    bool saw_header_row = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto parse_kv = [&](const std::string& key) -> std::string {
                const std::string tag = "# " + key + ": ";
                if (line.rfind(tag, 0) == 0) return line.substr(tag.size());
                return {};
            };
            if (auto v = parse_kv("config_hash"); !v.empty() && hash_out) *hash_out = v;
            if (auto v = parse_kv("horizon"); !v.empty()) batch.horizon = std::stoull(v);
            if (auto v = parse_kv("base_seed"); !v.empty()) batch.base_seed = std::stoull(v);
            if (auto v = parse_kv("schedule"); !v.empty()) batch.schedule_desc = v;
            if (auto v = parse_kv("class"); !v.empty()) batch.instance_desc = v;
            continue;
        }
        if (!saw_header_row) {
            // rep_id,seed,N_1..N_K,regret
            std::size_t commas = 0;
            for (char c : line)
                if (c == ',') ++commas;
            if (commas < 3 || line.rfind("rep_id,seed,", 0) != 0)
                throw ParseError("unexpected batch CSV header row: " + line);
            K = commas - 2;
            saw_header_row = true;
            continue;
        }
        RunRecord rec;
        std::stringstream ss(line);
        std::string tok;
        std::getline(ss, tok, ',');
        rec.rep_id = std::stoull(tok);
        std::getline(ss, tok, ',');
        rec.seed = std::stoull(tok);
        rec.pulls.resize(K);
        for (std::size_t a = 0; a < K; ++a) {
            std::getline(ss, tok, ',');
            rec.pulls[a] = std::stoull(tok);
        }
        std::getline(ss, tok, ',');
        rec.regret = std::stod(tok);
        rec.horizon = batch.horizon;
        batch.records.push_back(std::move(rec));
    }
    if (!saw_header_row) throw ParseError("batch CSV has no header row: " + path);
    return batch;
}

std::string tail_csv(const TailCurve& curve, const Provenance& prov) {
    std::string out;
    append_header(out, prov);
    out += "# arm: " + std::to_string(curve.arm) + "\n";
    out += "# replications: " + std::to_string(curve.replications) + "\n";
    out += "x,p_hat,ci_lo,ci_hi,exceedances\n";
    for (const auto& pt : curve.points) {
        out += fmt_double(pt.x);
        out += ',';
        out += fmt_double(pt.p_hat);
        out += ',';
        out += fmt_double(pt.ci_lo);
        out += ',';
        out += fmt_double(pt.ci_hi);
        out += ',';
        out += std::to_string(pt.exceedances);
        out += '\n';
    }
    return out;
}

void write_tail_csv(const std::string& path, const TailCurve& curve, const Provenance& prov) {
    write_text(path, tail_csv(curve, prov));
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write file: " + path);
    out << content;
    if (!out) throw ConfigError("write failed: " + path);
}

}  // namespace bandit::io
