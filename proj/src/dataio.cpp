#include "numeral/dataio.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "numeral/hurford.hpp"

namespace numeral {

namespace {

std::vector<std::string> split_csv_line(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open '" + path.string() + "'");
    }
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        rows.push_back(split_csv_line(std::move(line)));
    }
    return rows;
}

Number parse_number_field(const std::string& field, std::size_t row) {
    try {
        std::size_t used = 0;
        long long v = std::stoll(field, &used);
        if (used != field.size()) throw std::invalid_argument(field);
        return static_cast<Number>(v);
    } catch (const std::exception&) {
        throw BadExpression(row, "bad number field '" + field + "'");
    }
}

} // namespace

std::vector<SystemRecord> load_records(const std::filesystem::path& path) {
    auto rows = read_csv(path);
    if (rows.empty()) {
        throw DataError("'" + path.string() + "' is empty");
    }
    const auto& header = rows.front();
    if (header.size() < 3 || header[0] != "language" || header[1] != "number" ||
        header[2] != "tokens") {
        throw DataError("'" + path.string() + "' must start with header language,number,tokens");
    }
    const bool has_family = header.size() >= 4 && header[3] == "family";
    std::vector<SystemRecord> records;
    records.reserve(rows.size() - 1);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const std::size_t row = i + 1;
        const auto& fields = rows[i];
        if (fields.size() < 3) {
            throw BadExpression(row, "expected at least 3 fields");
        }
        SystemRecord record;
        record.language = fields[0];
        record.number = parse_number_field(fields[1], row);
        record.tokens = fields[2];
        if (has_family && fields.size() >= 4) record.family = fields[3];

        ExprPtr expr;
        try {
            expr = parse_tokens(record.tokens);
        } catch (const ParseError& e) {
            throw BadExpression(row, std::string("tokens do not parse: ") + e.what());
        }
        Number value;
        try {
            value = evaluate(expr);
        } catch (const InvalidExpression& e) {
            throw BadExpression(row, std::string("tokens do not evaluate: ") + e.what());
        }
        if (value != record.number) {
            throw BadExpression(row, "'" + record.tokens + "' evaluates to " +
                                         std::to_string(value) + ", not " +
                                         std::to_string(record.number));
        }
        if (!conforms_to_hurford(expr)) {
            throw BadExpression(row, "'" + record.tokens + "' is not Hurford-shaped");
        }
        records.push_back(std::move(record));
    }
    return records;
}

std::vector<NumeralSystem> load_systems(const std::filesystem::path& path, Range range) {
    range.validate();
    auto records = load_records(path);
    std::vector<std::string> order;
    std::map<std::string, NumeralSystem> by_language;
    std::set<std::pair<std::string, Number>> seen;
    std::size_t row = 1;
    for (const SystemRecord& record : records) {
        ++row;
        if (!range.contains(record.number)) continue;
        if (!seen.emplace(record.language, record.number).second) {
            throw BadExpression(row, "duplicate entry for (" + record.language + ", " +
                                         std::to_string(record.number) + ")");
        }
        auto [it, inserted] = by_language.try_emplace(record.language);
        if (inserted) {
            it->second.range = range;
            it->second.label = record.language;
            it->second.source = SystemSource::natural;
            order.push_back(record.language);
        }
        it->second.entries.emplace(record.number, parse_tokens(record.tokens));
    }
    std::vector<NumeralSystem> systems;
    systems.reserve(order.size());
    for (const std::string& language : order) {
        NumeralSystem& system = by_language.at(language);
        for (Number n = range.lo; n <= range.hi; ++n) {
            if (!system.entries.count(n)) {
                throw MissingNumber(language, n);
            }
        }
        systems.push_back(std::move(system));
    }
    return systems;
}

void export_systems(const std::vector<NumeralSystem>& systems, const std::filesystem::path& path) {
    std::string out = "language,number,tokens\n";
    for (const NumeralSystem& system : systems) {
        for (Number n = system.range.lo; n <= system.range.hi; ++n) {
            out += system.label;
            out += ',';
            out += std::to_string(n);
            out += ',';
            out += token_string(system.tokens(n));
            out += '\n';
        }
    }
    write_file_atomic(path, out);
}

void export_measures(std::vector<MeasureReport> reports, const std::filesystem::path& path) {
    std::sort(reports.begin(), reports.end(),
              [](const MeasureReport& a, const MeasureReport& b) { return a.system_id < b.system_id; });
    std::string out =
        "system_id,source,prior,irregularity_bits,processing_bits,lexicon_size,avg_morph_complexity\n";
    char buf[160];
    for (const MeasureReport& r : reports) {
        std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%lld,%.6f", r.irregularity_bits,
                      r.processing_bits, static_cast<long long>(r.lexicon_size),
                      r.avg_morph_complexity);
        out += r.system_id;
        out += ',';
        out += source_name(r.source);
        out += ',';
        out += r.prior_descriptor;
        out += ',';
        out += buf;
        out += '\n';
    }
    write_file_atomic(path, out);
}

std::vector<MeasureReport> load_measures(const std::filesystem::path& path) {
    auto rows = read_csv(path);
    if (rows.empty() || rows.front().size() != 7 || rows.front()[0] != "system_id") {
        throw DataError("'" + path.string() + "' is not a measures CSV");
    }
    std::vector<MeasureReport> reports;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& f = rows[i];
        if (f.size() != 7) throw DataError("measures row with wrong field count");
        MeasureReport r;
        r.system_id = f[0];
        r.source = source_from_name(f[1]);
        r.prior_descriptor = f[2];
        r.irregularity_bits = std::stod(f[3]);
        r.processing_bits = std::stod(f[4]);
        r.lexicon_size = std::stoll(f[5]);
        r.avg_morph_complexity = std::stod(f[6]);
        reports.push_back(std::move(r));
    }
    return reports;
}

AttestedPools derive_attested_pools(const std::vector<NumeralSystem>& systems) {
    std::set<Number> digits, multipliers;
    for (const NumeralSystem& system : systems) {
        GrammarParams params = extract_grammar(system);
        digits.insert(params.digits.begin(), params.digits.end());
        multipliers.insert(params.multipliers.begin(), params.multipliers.end());
    }
    AttestedPools pools;
    pools.digits.assign(digits.begin(), digits.end());
    pools.multipliers.assign(multipliers.begin(), multipliers.end());
    return pools;
}

AttestedPools load_attested_pools(const std::filesystem::path& path) {
    auto rows = read_csv(path);
    if (rows.empty()) {
        throw DataError("'" + path.string() + "' is empty");
    }
    const auto& header = rows.front();
    if (header.size() >= 3 && header[0] == "language") {
        return derive_attested_pools(load_systems(path));
    }
    if (header.size() != 2 || header[0] != "role" || header[1] != "value") {
        throw DataError("'" + path.string() + "' must have header role,value or language,number,tokens");
    }
    std::set<Number> digits, multipliers;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& f = rows[i];
        if (f.size() != 2) throw DataError("pool row with wrong field count");
        Number value = parse_number_field(f[1], i + 1);
        if (f[0] == "digit") {
            digits.insert(value);
        } else if (f[0] == "multiplier") {
            multipliers.insert(value);
        } else {
            throw DataError("unknown pool role '" + f[0] + "'");
        }
    }
    AttestedPools pools;
    pools.digits.assign(digits.begin(), digits.end());
    pools.multipliers.assign(multipliers.begin(), multipliers.end());
    return pools;
}

void export_attested_pools(const AttestedPools& pools, const std::filesystem::path& path) {
    std::string out = "role,value\n";
    for (Number d : pools.digits) {
        out += "digit," + std::to_string(d) + "\n";
    }
    for (Number m : pools.multipliers) {
        out += "multiplier," + std::to_string(m) + "\n";
    }
    write_file_atomic(path, out);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw DataError("cannot write '" + tmp.string() + "'");
        }
        out << content;
        if (!out.flush()) {
            throw DataError("failed writing '" + tmp.string() + "'");
        }
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open '" + path.string() + "'");
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace numeral
