#include "tagcloud/corpus.hpp"

#include "tagcloud/errors.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cstring>
#include <fstream>
#include <istream>
#include <sstream>
#include <tuple>

namespace tagcloud {

namespace {

constexpr std::string_view kMagic{"TAGCORP1", 8};
constexpr std::size_t kMaxDiagnostics = 20;

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front()))
        s.remove_prefix(1);
    while (!s.empty() && is_space(s.back()))
        s.remove_suffix(1);
    return s;
}

template <typename T>
std::optional<std::uint32_t> index_of(const std::vector<std::string>& sorted, T key) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), key);
    if (it == sorted.end() || *it != key)
        return std::nullopt;
    return static_cast<std::uint32_t>(it - sorted.begin());
}

// Little-endian encoding helpers for the binary corpus format.
void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i)
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i)
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

void put_str(std::string& out, const std::string& s) {
    put_u32(out, static_cast<std::uint32_t>(s.size()));
    out += s;
}

class Reader {
  public:
    explicit Reader(std::string_view bytes) : bytes_(bytes) {}

    std::uint64_t u(int width) {
        need(static_cast<std::size_t>(width));
        std::uint64_t v = 0;
        for (int i = 0; i < width; ++i)
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
        pos_ += static_cast<std::size_t>(width);
        return v;
    }
    std::uint32_t u32() { return static_cast<std::uint32_t>(u(4)); }
    std::uint64_t u64() { return u(8); }
    std::string str() {
        auto n = u32();
        need(n);
        std::string s(bytes_.substr(pos_, n));
        pos_ += n;
        return s;
    }
    std::string_view raw(std::size_t n) {
        need(n);
        auto s = bytes_.substr(pos_, n);
        pos_ += n;
        return s;
    }
    bool done() const { return pos_ == bytes_.size(); }

  private:
    void need(std::size_t n) const {
        if (bytes_.size() - pos_ < n)
            throw Error("corrupt corpus file: truncated");
    }
    std::string_view bytes_;
    std::size_t pos_ = 0;
};

} // namespace

std::optional<std::string> normalize_tag(std::string_view raw) {
    auto t = trim(raw);
    if (t.empty())
        return std::nullopt;
    std::string out(t);
    for (auto& c : out)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::optional<TagId> Corpus::find_tag(std::string_view tag) const {
    return index_of(tag_names_, tag);
}

std::optional<ResourceId> Corpus::find_resource(std::string_view resource) const {
    return index_of(resource_names_, resource);
}

TagId Corpus::tag_id(std::string_view tag) const {
    auto id = find_tag(tag);
    if (!id)
        throw NotFoundError("unknown tag '" + std::string(tag) + "'");
    return *id;
}

std::span<const ResourceId> Corpus::postings(TagId t) const {
    auto b = col_offsets_.at(t), e = col_offsets_.at(t + 1);
    return {col_resources_.data() + b, static_cast<std::size_t>(e - b)};
}

std::span<const std::uint32_t> Corpus::posting_weights(TagId t) const {
    auto b = col_offsets_.at(t), e = col_offsets_.at(t + 1);
    return {col_weights_.data() + b, static_cast<std::size_t>(e - b)};
}

std::span<const TagId> Corpus::resource_tags(ResourceId r) const {
    auto b = row_offsets_.at(r), e = row_offsets_.at(r + 1);
    return {row_tags_.data() + b, static_cast<std::size_t>(e - b)};
}

std::span<const std::uint32_t> Corpus::resource_weights(ResourceId r) const {
    auto b = row_offsets_.at(r), e = row_offsets_.at(r + 1);
    return {row_weights_.data() + b, static_cast<std::size_t>(e - b)};
}

std::uint32_t Corpus::resource_tag_count(ResourceId r) const {
    return static_cast<std::uint32_t>(row_offsets_.at(r + 1) - row_offsets_.at(r));
}

std::uint32_t Corpus::tag_resource_count(TagId t) const {
    return static_cast<std::uint32_t>(col_offsets_.at(t + 1) - col_offsets_.at(t));
}

std::uint32_t Corpus::weight(ResourceId r, TagId t) const {
    auto tags = resource_tags(r);
    auto it = std::lower_bound(tags.begin(), tags.end(), t);
    if (it == tags.end() || *it != t)
        return 0;
    return resource_weights(r)[static_cast<std::size_t>(it - tags.begin())];
}

TagStats Corpus::tag_stats(std::string_view tag) const {
    auto t = tag_id(tag);
    TagStats s;
    s.resources = tag_resource_count(t);
    for (auto w : posting_weights(t))
        s.total_weight += w;
    return s;
}

void Corpus::build_columns() {
    const auto n_tags = tag_names_.size();
    std::vector<std::uint64_t> counts(n_tags + 1, 0);
    for (auto t : row_tags_)
        ++counts[t + 1];
    col_offsets_.assign(n_tags + 1, 0);
    for (std::size_t t = 0; t < n_tags; ++t)
        col_offsets_[t + 1] = col_offsets_[t] + counts[t + 1];
    col_resources_.assign(row_tags_.size(), 0);
    col_weights_.assign(row_tags_.size(), 0);
    std::vector<std::uint64_t> cursor(col_offsets_.begin(), col_offsets_.end() - 1);
    // Rows are visited in increasing resource order, so postings come out sorted.
    for (std::size_t r = 0; r + 1 < row_offsets_.size(); ++r) {
        for (auto k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
            auto pos = cursor[row_tags_[k]]++;
            col_resources_[pos] = static_cast<ResourceId>(r);
            col_weights_[pos] = row_weights_[k];
        }
    }
}

bool Corpus::check_invariants() const {
    if (row_offsets_.size() != resource_names_.size() + 1 || col_offsets_.size() != tag_names_.size() + 1)
        return false;
    if (row_offsets_.back() != row_tags_.size() || col_offsets_.back() != col_resources_.size())
        return false;
    if (row_tags_.size() != col_resources_.size())
        return false;
    if (!std::is_sorted(tag_names_.begin(), tag_names_.end()) ||
        std::adjacent_find(tag_names_.begin(), tag_names_.end()) != tag_names_.end())
        return false;
    std::uint64_t sum_m = 0;
    for (ResourceId r = 0; r < resource_count(); ++r) {
        auto tags = resource_tags(r);
        sum_m += resource_tag_count(r);
        if (tags.empty())
            return false;
        for (std::size_t k = 0; k < tags.size(); ++k) {
            if (tags[k] >= tag_count() || (k > 0 && tags[k - 1] >= tags[k]))
                return false;
            if (resource_weights(r)[k] < 1)
                return false;
        }
    }
    std::uint64_t sum_n = 0;
    for (TagId t = 0; t < tag_count(); ++t) {
        auto p = postings(t);
        sum_n += p.size();
        if (p.size() != tag_resource_count(t))
            return false;
        for (std::size_t k = 0; k < p.size(); ++k) {
            if (p[k] >= resource_count() || (k > 0 && p[k - 1] >= p[k]))
                return false;
            if (posting_weights(t)[k] != weight(p[k], t))
                return false;
        }
    }
    return sum_m == cell_count() && sum_n == cell_count();
}

Corpus Corpus::restrict_to_tag(TagId t) const {
    auto keep = postings(t);
    std::vector<bool> tag_used(tag_count(), false);
    for (auto r : keep)
        for (auto tag : resource_tags(r))
            tag_used[tag] = true;

    std::vector<TagId> remap(tag_count(), 0);
    Corpus out;
    for (TagId old = 0; old < tag_count(); ++old) {
        if (tag_used[old]) {
            remap[old] = static_cast<TagId>(out.tag_names_.size());
            out.tag_names_.push_back(tag_names_[old]);
        }
    }
    for (auto r : keep) {
        out.resource_names_.push_back(resource_names_[r]);
        auto tags = resource_tags(r);
        auto weights = resource_weights(r);
        for (std::size_t k = 0; k < tags.size(); ++k) {
            out.row_tags_.push_back(remap[tags[k]]);
            out.row_weights_.push_back(weights[k]);
        }
        out.row_offsets_.push_back(out.row_tags_.size());
    }
    out.build_columns();
    return out;
}

std::string Corpus::serialize() const {
    std::string out(kMagic);
    put_u64(out, resource_names_.size());
    put_u64(out, tag_names_.size());
    put_u64(out, row_tags_.size());
    for (const auto& s : resource_names_)
        put_str(out, s);
    for (const auto& s : tag_names_)
        put_str(out, s);
    for (ResourceId r = 0; r < resource_count(); ++r) {
        auto tags = resource_tags(r);
        auto weights = resource_weights(r);
        put_u32(out, static_cast<std::uint32_t>(tags.size()));
        for (std::size_t k = 0; k < tags.size(); ++k) {
            put_u32(out, tags[k]);
            put_u32(out, weights[k]);
        }
    }
    return out;
}

bool Corpus::looks_serialized(std::string_view bytes) {
    return bytes.substr(0, kMagic.size()) == kMagic;
}

Corpus Corpus::deserialize(std::string_view bytes) {
    Reader in(bytes);
    if (in.raw(kMagic.size()) != kMagic)
        throw Error("corrupt corpus file: bad magic");
    auto n_res = in.u64(), n_tags = in.u64(), n_cells = in.u64();
    Corpus c;
    c.resource_names_.reserve(n_res);
    for (std::uint64_t i = 0; i < n_res; ++i)
        c.resource_names_.push_back(in.str());
    for (std::uint64_t i = 0; i < n_tags; ++i)
        c.tag_names_.push_back(in.str());
    for (std::uint64_t r = 0; r < n_res; ++r) {
        auto m = in.u32();
        for (std::uint32_t k = 0; k < m; ++k) {
            c.row_tags_.push_back(in.u32());
            c.row_weights_.push_back(in.u32());
        }
        c.row_offsets_.push_back(c.row_tags_.size());
    }
    if (!in.done() || c.row_tags_.size() != n_cells)
        throw Error("corrupt corpus file: size mismatch");
    for (auto t : c.row_tags_)
        if (t >= n_tags)
            throw Error("corrupt corpus file: tag index out of range");
    c.build_columns();
    if (!c.check_invariants())
        throw Error("corrupt corpus file: invariant violation");
    return c;
}

std::string Corpus::digest() const {
    auto bytes = serialize();
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
        throw Error("sha256 failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0xf]);
    }
    return out;
}

void CorpusBuilder::add(Assignment a) {
    auto tag = normalize_tag(a.tag);
    if (!tag)
        throw InvalidArgumentError("tag is empty after normalization", "tag");
    a.tag = std::move(*tag);
    records_.push_back(std::move(a));
}

Corpus CorpusBuilder::build() && {
    auto& recs = records_;
    auto key = [](const Assignment& a) { return std::tie(a.resource, a.tag, a.user); };
    std::sort(recs.begin(), recs.end(), [&](const Assignment& x, const Assignment& y) { return key(x) < key(y); });
    recs.erase(std::unique(recs.begin(), recs.end()), recs.end());

    Corpus c;
    for (const auto& a : recs)
        c.tag_names_.push_back(a.tag);
    std::sort(c.tag_names_.begin(), c.tag_names_.end());
    c.tag_names_.erase(std::unique(c.tag_names_.begin(), c.tag_names_.end()), c.tag_names_.end());

    // recs is grouped by resource, then tag; each run of equal (resource, tag)
    // is one cell whose length is the number of distinct users.
    std::size_t i = 0;
    while (i < recs.size()) {
        const auto& resource = recs[i].resource;
        c.resource_names_.push_back(resource);
        while (i < recs.size() && recs[i].resource == resource) {
            const auto& tag = recs[i].tag;
            std::uint32_t users = 0;
            while (i < recs.size() && recs[i].resource == resource && recs[i].tag == tag) {
                ++users;
                ++i;
            }
            c.row_tags_.push_back(*index_of(c.tag_names_, std::string_view(tag)));
            c.row_weights_.push_back(users);
        }
        c.row_offsets_.push_back(c.row_tags_.size());
    }
    recs.clear();
    c.build_columns();
    return c;
}

Corpus build_corpus(std::span<const Assignment> records) {
    CorpusBuilder b;
    for (const auto& a : records)
        b.add(a);
    return std::move(b).build();
}

Assignment parse_record(std::string_view line, InputFormat format, std::size_t line_number) {
    Assignment a;
    if (format == InputFormat::Tsv) {
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        std::array<std::string_view, 3> cols;
        std::size_t n = 0;
        std::size_t start = 0;
        while (true) {
            auto tab = line.find('\t', start);
            if (n == 3)
                throw ParseError(line_number, "expected 3 tab-separated columns, got more");
            cols[n++] = line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start);
            if (tab == std::string_view::npos)
                break;
            start = tab + 1;
        }
        if (n != 3)
            throw ParseError(line_number, "expected 3 tab-separated columns, got " + std::to_string(n));
        a.user = std::string(cols[0]);
        a.resource = std::string(cols[1]);
        a.tag = std::string(cols[2]);
    } else {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(line_number, std::string("invalid JSON: ") + e.what());
        }
        if (!j.is_object())
            throw ParseError(line_number, "record is not a JSON object");
        for (auto [field, dest] : {std::pair{"user", &a.user}, {"resource", &a.resource}, {"tag", &a.tag}}) {
            auto it = j.find(field);
            if (it == j.end() || !it->is_string())
                throw ParseError(line_number, std::string("missing string field '") + field + "'");
            *dest = it->get<std::string>();
        }
    }
    if (a.user.empty())
        throw ParseError(line_number, "empty user");
    if (a.resource.empty())
        throw ParseError(line_number, "empty resource");
    auto tag = normalize_tag(a.tag);
    if (!tag)
        throw ParseError(line_number, "empty tag");
    a.tag = std::move(*tag);
    return a;
}

void ingest_into(CorpusBuilder& builder, std::istream& in, InputFormat format, ErrorPolicy policy,
                 IngestReport& report) {
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        ++report.lines;
        if (trim(line).empty())
            continue;
        try {
            builder.add(parse_record(line, format, line_number));
            ++report.records;
        } catch (const ParseError& e) {
            if (policy == ErrorPolicy::Abort)
                throw;
            ++report.skipped;
            if (report.diagnostics.size() < kMaxDiagnostics)
                report.diagnostics.emplace_back(e.what());
        }
    }
}

Corpus ingest(std::istream& in, InputFormat format, ErrorPolicy policy, IngestReport* report) {
    IngestReport local;
    auto& rep = report ? *report : local;
    rep = {};
    CorpusBuilder builder;
    ingest_into(builder, in, format, policy, rep);
    return std::move(builder).build();
}

InputFormat format_for_path(const std::filesystem::path& path) {
    auto ext = path.extension().string();
    for (auto& c : ext)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (ext == ".tsv" || ext == ".tab" || ext == ".txt")
        return InputFormat::Tsv;
    return InputFormat::JsonLines;
}

Corpus load_corpus(const std::filesystem::path& path, std::optional<InputFormat> format, ErrorPolicy policy,
                   IngestReport* report) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw NotFoundError("cannot open input file '" + path.string() + "'");
    std::array<char, kMagic.size()> head{};
    in.read(head.data(), head.size());
    auto got = static_cast<std::size_t>(in.gcount());
    if (got == kMagic.size() && Corpus::looks_serialized({head.data(), got})) {
        std::ostringstream buf;
        buf.write(head.data(), static_cast<std::streamsize>(got));
        buf << in.rdbuf();
        return Corpus::deserialize(buf.str());
    }
    in.clear();
    in.seekg(0);
    try {
        return ingest(in, format.value_or(format_for_path(path)), policy, report);
    } catch (const ParseError& e) {
        throw ParseError(e.line(), e.detail(), path.string());
    }
}

Corpus load_corpora(std::span<const std::filesystem::path> paths, std::optional<InputFormat> format,
                    ErrorPolicy policy, IngestReport* report) {
    if (paths.empty())
        throw InvalidArgumentError("no input given", "input");
    if (paths.size() == 1)
        return load_corpus(paths.front(), format, policy, report);
    IngestReport local;
    auto& rep = report ? *report : local;
    rep = {};
    CorpusBuilder builder;
    for (const auto& path : paths) {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw NotFoundError("cannot open input file '" + path.string() + "'");
        std::array<char, kMagic.size()> head{};
        in.read(head.data(), head.size());
        if (Corpus::looks_serialized({head.data(), static_cast<std::size_t>(in.gcount())}))
            throw InvalidArgumentError("serialized corpus '" + path.string() + "' cannot be merged with other inputs",
                                       "input");
        in.clear();
        in.seekg(0);
        try {
            ingest_into(builder, in, format.value_or(format_for_path(path)), policy, rep);
        } catch (const ParseError& e) {
            throw ParseError(e.line(), e.detail(), path.string());
        }
    }
    return std::move(builder).build();
}

} // namespace tagcloud
