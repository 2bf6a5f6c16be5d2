#include "webimpact/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "webimpact/csv.hpp"
#include "webimpact/error.hpp"

namespace webimpact {

namespace {

template <typename Int>
Int parse_integer(std::string_view text, std::size_t line, std::string_view what) {
  Int value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw ParseError("bad " + std::string(what) + " '" + std::string(text) + "'", line);
  return value;
}

double parse_real(std::string_view text, std::size_t line, std::string_view what) {
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw ParseError("bad " + std::string(what) + " '" + std::string(text) + "'", line);
  return value;
}

// Attribute-safe XML text.
std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// Whitespace-separated tokens; "double quoted" tokens may contain spaces.
std::vector<std::string> pajek_tokens(std::string_view line, std::size_t lineno) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
      ++i;
      continue;
    }
    if (line[i] == '"') {
      const auto close = line.find('"', i + 1);
      if (close == std::string_view::npos) throw ParseError("unterminated quoted label", lineno);
      out.emplace_back(line.substr(i + 1, close - i - 1));
      i = close + 1;
    } else {
      const auto end = line.find_first_of(" \t\r", i);
      out.emplace_back(line.substr(i, end == std::string_view::npos ? std::string_view::npos : end - i));
      i = end == std::string_view::npos ? line.size() : end;
    }
  }
  return out;
}

bool istarts_with(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(s[i])) != std::tolower(static_cast<unsigned char>(prefix[i]))) return false;
  return true;
}

void require_plain_label(std::string_view label) {
  if (label.find_first_of("\"\r\n") != std::string_view::npos)
    throw ValidationError("label '" + std::string(label) + "' cannot be written to a NET file");
}

}  // namespace

std::vector<Institution> read_roster(std::istream& in) {
  const CsvTable t = read_csv(in);
  const auto c_id = t.column("id"), c_name = t.column("name"), c_kind = t.column("kind"), c_sector = t.column("sector"),
             c_domains = t.column("domains"), c_rank = t.column("source_rank");
  std::vector<Institution> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const auto line = t.lines[r];
    Institution inst;
    inst.id = row[c_id];
    inst.name = row[c_name];
    try {
      inst.kind = parse_kind(row[c_kind]);
      if (!row[c_sector].empty()) inst.sector = parse_sector(row[c_sector]);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line);
    }
    for (auto& d : split(row[c_domains], ';'))
      if (!d.empty()) inst.domains.push_back(std::move(d));
    inst.source_rank = parse_integer<int>(row[c_rank], line, "source_rank");
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<Institution> read_roster(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open roster '" + path.string() + "'");
  return read_roster(in);
}

void write_roster(std::ostream& out, std::span<const Institution> roster) {
  write_csv_row(out, {"id", "name", "kind", "sector", "domains", "source_rank"});
  for (const auto& inst : roster) {
    std::string domains;
    for (std::size_t i = 0; i < inst.domains.size(); ++i) domains += (i ? ";" : "") + inst.domains[i];
    write_csv_row(out, {inst.id, inst.name, to_string(inst.kind), inst.sector ? sector_slug(*inst.sector) : "",
                        domains, std::to_string(inst.source_rank)});
  }
}

std::vector<WebMetricsRecord> read_metrics(std::istream& in) {
  const CsvTable t = read_csv(in);
  const auto c_id = t.column("institution_id"), c_date = t.column("sample_date"), c_tpc = t.column("tpc"),
             c_apc = t.column("apc"), c_gum = t.column("gum"), c_lum = t.column("lum"),
             c_da = t.column("domain_authority"), c_ext = t.column("external_links"), c_root = t.column("root_domains"),
             c_cit = t.column("citations"), c_sales = t.column("sales");
  std::vector<WebMetricsRecord> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const auto line = t.lines[r];
    WebMetricsRecord rec;
    rec.institution_id = row[c_id];
    try {
      rec.sample_date = parse_date(row[c_date]);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line);
    }
    rec.tpc = parse_integer<std::int64_t>(row[c_tpc], line, "tpc");
    rec.apc = parse_integer<std::int64_t>(row[c_apc], line, "apc");
    rec.gum = parse_integer<std::int64_t>(row[c_gum], line, "gum");
    rec.lum = parse_integer<std::int64_t>(row[c_lum], line, "lum");
    rec.domain_authority = parse_integer<int>(row[c_da], line, "domain_authority");
    rec.external_links = parse_integer<std::int64_t>(row[c_ext], line, "external_links");
    rec.root_domains = parse_integer<std::int64_t>(row[c_root], line, "root_domains");
    if (!row[c_cit].empty()) rec.citations = parse_integer<std::int64_t>(row[c_cit], line, "citations");
    if (!row[c_sales].empty()) rec.sales = parse_real(row[c_sales], line, "sales");
    out.push_back(std::move(rec));
  }
  return out;
}

SampleSet load_sample(const std::filesystem::path& path, std::string label, std::span<const Institution> roster) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open metrics '" + path.string() + "'");
  std::map<std::string, const Institution*, std::less<>> by_id;
  for (const auto& inst : roster) by_id.emplace(inst.id, &inst);

  SampleSet sample(std::move(label));
  for (auto& rec : read_metrics(in)) {
    const auto it = by_id.find(rec.institution_id);
    if (it == by_id.end())
      throw ValidationError(path.string() + ": record for unknown institution '" + rec.institution_id + "'");
    check_record(rec, it->second->kind);
    if (!it->second->domains.empty()) annotate_authority_scope(rec, it->second->domains.front());
    sample.add(std::move(rec));
  }
  return sample;
}

void write_metrics(std::ostream& out, std::span<const WebMetricsRecord> records) {
  write_csv_row(out, {"institution_id", "sample_date", "tpc", "apc", "gum", "lum", "domain_authority", "external_links",
                      "root_domains", "citations", "sales"});
  for (const auto& r : records) {
    write_csv_row(out, {r.institution_id, format_date(r.sample_date), std::to_string(r.tpc), std::to_string(r.apc),
                        std::to_string(r.gum), std::to_string(r.lum), std::to_string(r.domain_authority),
                        std::to_string(r.external_links), std::to_string(r.root_domains),
                        r.citations ? std::to_string(*r.citations) : "", r.sales ? format_number(*r.sales) : ""});
  }
}

std::vector<FixtureRow> read_fixtures(std::istream& in) {
  const CsvTable t = read_csv(in);
  const auto c_q = t.column("query_string"), c_region = t.column("region"), c_value = t.column("value"),
             c_at = t.column("retrieved_at");
  std::vector<FixtureRow> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const auto line = t.lines[r];
    FixtureRow f;
    f.query = row[c_q];
    if (f.query.empty()) throw ParseError("empty query_string", line);
    try {
      f.region = parse_region(row[c_region]);
      f.retrieved_at = parse_timestamp(row[c_at]);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line);
    }
    f.value = parse_integer<std::uint64_t>(row[c_value], line, "value");
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<FixtureRow> read_fixtures(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open fixtures '" + path.string() + "'");
  return read_fixtures(in);
}

void write_hit_counts(std::ostream& out, std::span<const HitCount> hits) {
  write_csv_row(out, {"query_string", "region", "value", "retrieved_at", "recorded", "error"});
  for (const auto& h : hits)
    write_csv_row(out, {h.query, to_string(h.region), std::to_string(h.value), format_timestamp(h.retrieved_at),
                        h.recorded ? "1" : "0", h.error});
}

std::vector<HitCount> read_hit_counts(std::istream& in) {
  const CsvTable t = read_csv(in);
  const auto c_q = t.column("query_string"), c_region = t.column("region"), c_value = t.column("value"),
             c_at = t.column("retrieved_at");
  const bool has_rec = t.has_column("recorded");
  const bool has_err = t.has_column("error");
  std::vector<HitCount> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const auto line = t.lines[r];
    HitCount h;
    h.query = row[c_q];
    try {
      h.region = parse_region(row[c_region]);
      h.retrieved_at = parse_timestamp(row[c_at]);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line);
    }
    h.value = parse_integer<std::uint64_t>(row[c_value], line, "value");
    if (has_rec) h.recorded = row[t.column("recorded")] == "1";
    if (has_err) h.error = row[t.column("error")];
    out.push_back(std::move(h));
  }
  return out;
}

std::vector<PairwiseHits> read_pairwise(std::istream& in) {
  const CsvTable t = read_csv(in);
  const auto c_h = t.column("host_domain"), c_t = t.column("target_domain"), c_hits = t.column("hits");
  std::vector<PairwiseHits> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r)
    out.push_back({t.rows[r][c_h], t.rows[r][c_t], parse_integer<std::uint64_t>(t.rows[r][c_hits], t.lines[r], "hits")});
  return out;
}

void write_pairwise(std::ostream& out, std::span<const PairwiseHits> rows) {
  write_csv_row(out, {"host_domain", "target_domain", "hits"});
  for (const auto& r : rows) write_csv_row(out, {r.host_domain, r.target_domain, std::to_string(r.hits)});
}

std::vector<PairwiseHits> pairwise_from_hits(std::span<const QuerySpec> plan, std::span<const HitCount> hits) {
  if (plan.size() != hits.size()) throw ValidationError("plan and hit counts differ in length");
  std::vector<PairwiseHits> out;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    if (plan[i].metric != Metric::PairwiseMention) continue;
    out.push_back({*plan[i].host_domain, plan[i].target_domain, hits[i].value});
  }
  return out;
}

void write_query_plan(std::ostream& out, std::span<const QuerySpec> plan) {
  write_csv_row(out, {"metric", "target", "host", "region", "engine", "query_string"});
  for (const auto& s : plan)
    write_csv_row(out, {to_string(s.metric), s.target_domain, s.host_domain.value_or(""), to_string(s.region),
                        to_string(s.engine), build_query(s)});
}

std::vector<QuerySpec> read_query_plan(std::istream& in) {
  const CsvTable t = read_csv(in);
  const auto c_m = t.column("metric"), c_t = t.column("target"), c_h = t.column("host"), c_r = t.column("region"),
             c_e = t.column("engine"), c_q = t.column("query_string");
  std::vector<QuerySpec> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const auto line = t.lines[r];
    QuerySpec s;
    try {
      s.metric = parse_metric(row[c_m]);
      s.region = parse_region(row[c_r]);
      s.engine = parse_engine(row[c_e]);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line);
    }
    s.target_domain = row[c_t];
    if (!row[c_h].empty()) s.host_domain = row[c_h];
    try {
      if (build_query(s) != row[c_q]) throw ParseError("query_string does not match the spec columns", line);
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), line);
    }
    out.push_back(std::move(s));
  }
  return out;
}

void write_pajek(std::ostream& out, const MentionNetwork& net) {
  const auto& nodes = net.nodes();
  out << "% webimpact mention network\n";
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    require_plain_label(nodes[v].id);
    out << "% node " << v + 1 << " id \"" << nodes[v].id << "\" kind " << to_string(nodes[v].kind) << " sector "
        << (nodes[v].sector ? sector_slug(*nodes[v].sector) : "-") << " tpc " << nodes[v].tpc << '\n';
  }
  out << "*Vertices " << nodes.size() << '\n';
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    require_plain_label(nodes[v].label);
    out << v + 1 << " \"" << nodes[v].label << "\"\n";
  }
  out << "*Arcs\n";
  for (std::size_t a = 0; a < net.arc_count(); ++a) {
    const auto [h, t] = net.endpoints(a);
    out << h + 1 << ' ' << t + 1 << ' ' << net.arcs()[a].hits << '\n';
  }
}

MentionNetwork read_pajek(std::istream& in) {
  struct NodeNote {
    std::string id;
    InstitutionKind kind = InstitutionKind::University;
    std::optional<Sector> sector;
    std::uint64_t tpc = 0;
  };
  enum class Section { Preamble, Vertices, Arcs };

  std::map<std::size_t, NodeNote> notes;
  std::vector<std::string> labels;
  std::vector<std::tuple<std::size_t, std::size_t, std::uint64_t, std::size_t>> arcs;
  std::size_t declared = 0;
  Section section = Section::Preamble;

  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (line.ends_with('\r')) line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

    if (line.starts_with('%')) {
      if (!line.starts_with("% node ")) continue;
      const auto tok = pajek_tokens(line.substr(7), lineno);
      if (tok.size() != 9 || tok[1] != "id" || tok[3] != "kind" || tok[5] != "sector" || tok[7] != "tpc")
        throw ParseError("malformed node comment", lineno);
      NodeNote note;
      note.id = tok[2];
      try {
        note.kind = parse_kind(tok[4]);
        if (tok[6] != "-") note.sector = parse_sector(tok[6]);
      } catch (const ParseError& e) {
        throw ParseError(e.what(), lineno);
      }
      note.tpc = parse_integer<std::uint64_t>(tok[8], lineno, "tpc");
      notes[parse_integer<std::size_t>(tok[0], lineno, "vertex index")] = std::move(note);
      continue;
    }

    if (line.starts_with('*')) {
      const auto tok = pajek_tokens(line, lineno);
      if (istarts_with(tok[0], "*vertices")) {
        if (section != Section::Preamble || tok.size() < 2) throw ParseError("misplaced or malformed *Vertices", lineno);
        declared = parse_integer<std::size_t>(tok[1], lineno, "vertex count");
        section = Section::Vertices;
      } else if (istarts_with(tok[0], "*arcs") && tok[0].size() == 5) {
        if (section != Section::Vertices) throw ParseError("*Arcs before *Vertices", lineno);
        if (labels.size() != declared)
          throw ParseError("expected " + std::to_string(declared) + " vertices, found " + std::to_string(labels.size()), lineno);
        section = Section::Arcs;
      } else {
        throw ParseError("unsupported section '" + tok[0] + "'", lineno);
      }
      continue;
    }

    const auto tok = pajek_tokens(line, lineno);
    switch (section) {
      case Section::Preamble: throw ParseError("data before *Vertices", lineno);
      case Section::Vertices: {
        const auto idx = parse_integer<std::size_t>(tok[0], lineno, "vertex index");
        if (idx != labels.size() + 1 || idx > declared)
          throw ParseError("vertex " + tok[0] + " out of sequence", lineno);
        labels.push_back(tok.size() > 1 ? tok[1] : tok[0]);
        break;
      }
      case Section::Arcs: {
        if (tok.size() < 2) throw ParseError("arc line needs two vertices", lineno);
        const auto s = parse_integer<std::size_t>(tok[0], lineno, "vertex index");
        const auto t = parse_integer<std::size_t>(tok[1], lineno, "vertex index");
        if (s < 1 || s > declared || t < 1 || t > declared)
          throw ParseError("arc references vertex outside 1.." + std::to_string(declared), lineno);
        std::uint64_t w = 1;
        if (tok.size() > 2) {
          const double wd = parse_real(tok[2], lineno, "arc weight");
          if (!(wd >= 1.0) || wd != static_cast<double>(static_cast<std::uint64_t>(wd)))
            throw ParseError("arc weight must be a positive integer", lineno);
          w = static_cast<std::uint64_t>(wd);
        }
        arcs.emplace_back(s - 1, t - 1, w, lineno);
        break;
      }
    }
  }
  if (section == Section::Preamble) throw ParseError("missing *Vertices header", lineno);
  if (labels.size() != declared)
    throw ParseError("expected " + std::to_string(declared) + " vertices, found " + std::to_string(labels.size()), lineno);

  MentionNetwork net;
  for (std::size_t v = 0; v < labels.size(); ++v) {
    NetworkNode node;
    node.label = labels[v];
    if (const auto it = notes.find(v + 1); it != notes.end()) {
      node.id = it->second.id;
      node.kind = it->second.kind;
      node.sector = it->second.sector;
      node.tpc = it->second.tpc;
    } else {
      node.id = labels[v];
      node.kind = labels[v].find(".edu") != std::string::npos ? InstitutionKind::University : InstitutionKind::Company;
    }
    try {
      net.add_node(std::move(node));
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  for (const auto& [s, t, w, line] : arcs) {
    try {
      net.add_arc(net.nodes()[s].id, net.nodes()[t].id, w);
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), line);
    }
  }
  return net;
}

void write_gexf(std::ostream& out, const MentionNetwork& net, const std::vector<NodePlacement>* placements) {
  if (placements && placements->size() != net.node_count())
    throw ValidationError("placements do not cover every node");

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<gexf xmlns=\"http://www.gexf.net/1.2draft\" xmlns:viz=\"http://www.gexf.net/1.2draft/viz\" "
         "xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" "
         "xsi:schemaLocation=\"http://www.gexf.net/1.2draft http://www.gexf.net/1.2draft/gexf.xsd\" version=\"1.2\">\n"
         "  <meta>\n"
         "    <creator>webimpact</creator>\n"
         "    <description>University-company URL mention network</description>\n"
         "  </meta>\n"
         "  <graph mode=\"static\" defaultedgetype=\"directed\">\n"
         "    <attributes class=\"node\">\n"
         "      <attribute id=\"kind\" title=\"kind\" type=\"string\"/>\n"
         "      <attribute id=\"sector\" title=\"sector\" type=\"string\"/>\n"
         "      <attribute id=\"tpc\" title=\"tpc\" type=\"long\"/>\n"
         "    </attributes>\n"
         "    <attributes class=\"edge\">\n"
         "      <attribute id=\"edge_type\" title=\"edge_type\" type=\"string\"/>\n"
         "    </attributes>\n";

  out << "    <nodes count=\"" << net.node_count() << "\">\n";
  for (std::size_t v = 0; v < net.node_count(); ++v) {
    const auto& n = net.nodes()[v];
    out << "      <node id=\"" << xml_escape(n.id) << "\" label=\"" << xml_escape(n.label) << "\">\n"
        << "        <attvalues>\n"
        << "          <attvalue for=\"kind\" value=\"" << to_string(n.kind) << "\"/>\n";
    if (n.sector) out << "          <attvalue for=\"sector\" value=\"" << sector_slug(*n.sector) << "\"/>\n";
    out << "          <attvalue for=\"tpc\" value=\"" << n.tpc << "\"/>\n"
        << "        </attvalues>\n";
    if (placements) {
      const auto& p = (*placements)[v];
      if (p.node_id != n.id) throw ValidationError("placement order does not match node order");
      const Rgb rgb = legend_color(n.kind, n.sector).rgb;
      out << "        <viz:size value=\"" << format_number(p.size) << "\"/>\n"
          << "        <viz:position x=\"" << format_number(p.x) << "\" y=\"" << format_number(p.y) << "\" z=\"0\"/>\n"
          << "        <viz:color r=\"" << rgb.r << "\" g=\"" << rgb.g << "\" b=\"" << rgb.b << "\"/>\n";
    }
    out << "      </node>\n";
  }
  out << "    </nodes>\n";

  out << "    <edges count=\"" << net.arc_count() << "\">\n";
  for (std::size_t a = 0; a < net.arc_count(); ++a) {
    const auto& arc = net.arcs()[a];
    out << "      <edge id=\"" << a << "\" source=\"" << xml_escape(arc.host_id) << "\" target=\"" << xml_escape(arc.target_id)
        << "\" weight=\"" << arc.hits << "\">\n"
        << "        <attvalues>\n"
        << "          <attvalue for=\"edge_type\" value=\"" << to_string(arc.edge_type) << "\"/>\n"
        << "        </attvalues>\n"
        << "      </edge>\n";
  }
  out << "    </edges>\n"
         "  </graph>\n"
         "</gexf>\n";
}

void write_placements(std::ostream& out, std::span<const NodePlacement> placements) {
  write_csv_row(out, {"node_id", "x", "y", "size", "color"});
  for (const auto& p : placements)
    write_csv_row(out, {p.node_id, format_number(p.x), format_number(p.y), format_number(p.size), p.color});
}

std::vector<NodePlacement> read_placements(std::istream& in) {
  const CsvTable t = read_csv(in);
  const auto c_id = t.column("node_id"), c_x = t.column("x"), c_y = t.column("y"), c_s = t.column("size"),
             c_c = t.column("color");
  std::vector<NodePlacement> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    out.push_back({row[c_id], parse_real(row[c_x], t.lines[r], "x"), parse_real(row[c_y], t.lines[r], "y"),
                   parse_real(row[c_s], t.lines[r], "size"), row[c_c]});
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace webimpact
