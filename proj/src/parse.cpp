#include "tropescope/parse.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>

#include "tropescope/error.hpp"

namespace tropescope {

namespace {

constexpr std::array kVoidElements{"area", "base",  "br",   "col",   "embed", "hr",    "img",
                                   "input", "link", "meta", "param", "source", "track", "wbr"};
constexpr std::array kRawTextElements{"script", "style", "textarea", "title"};
constexpr std::array kExcludedElements{"nav", "header", "footer", "aside"};

template <std::size_t N>
bool one_of(std::string_view name, const std::array<const char*, N>& set) {
  return std::any_of(set.begin(), set.end(), [&](const char* s) { return name == s; });
}

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

void append_utf8(std::string& out, unsigned long cp) {
  if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

// Attribute values only need the handful of entities that show up in hrefs.
std::string decode_entities(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '&') {
      out += text[i];
      continue;
    }
    const auto semi = text.find(';', i);
    if (semi == std::string_view::npos || semi - i > 10) {
      out += '&';
      continue;
    }
    const auto name = text.substr(i + 1, semi - i - 1);
    if (name == "amp") {
      out += '&';
    } else if (name == "quot") {
      out += '"';
    } else if (name == "apos") {
      out += '\'';
    } else if (name == "lt") {
      out += '<';
    } else if (name == "gt") {
      out += '>';
    } else if (name.size() > 1 && name[0] == '#') {
      const bool hex = name[1] == 'x' || name[1] == 'X';
      const auto digits = name.substr(hex ? 2 : 1);
      unsigned long cp = 0;
      const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), cp, hex ? 16 : 10);
      if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
        out += '&';
        continue;
      }
      append_utf8(out, cp);
    } else {
      out += '&';
      continue;
    }
    i = semi;
  }
  return out;
}

struct Tag {
  std::string name;  // lowercased
  bool closing = false;
  bool self_closing = false;
  std::map<std::string, std::string> attributes;  // lowercased names, decoded values
};

// Parses the tag starting at html[pos] == '<'; returns the position just
// past it. A '<' that does not start a tag yields nullopt.
std::optional<Tag> read_tag(std::string_view html, std::size_t& pos) {
  std::size_t i = pos + 1;
  Tag tag;
  if (i < html.size() && html[i] == '/') {
    tag.closing = true;
    ++i;
  }
  const auto name_start = i;
  while (i < html.size() && (std::isalnum(static_cast<unsigned char>(html[i])) || html[i] == '-' || html[i] == ':')) ++i;
  if (i == name_start) return std::nullopt;
  tag.name = lower(html.substr(name_start, i - name_start));

  while (i < html.size()) {
    while (i < html.size() && is_space(html[i])) ++i;
    if (i >= html.size()) break;
    if (html[i] == '>') {
      ++i;
      pos = i;
      return tag;
    }
    if (html[i] == '/') {
      tag.self_closing = true;
      ++i;
      continue;
    }
    const auto attr_start = i;
    while (i < html.size() && !is_space(html[i]) && html[i] != '=' && html[i] != '>' && html[i] != '/') ++i;
    std::string attr = lower(html.substr(attr_start, i - attr_start));
    if (attr.empty()) {
      ++i;  // stray character, e.g. a lone quote
      continue;
    }
    while (i < html.size() && is_space(html[i])) ++i;
    std::string value;
    if (i < html.size() && html[i] == '=') {
      ++i;
      while (i < html.size() && is_space(html[i])) ++i;
      if (i < html.size() && (html[i] == '"' || html[i] == '\'')) {
        const char quote = html[i++];
        const auto end = html.find(quote, i);
        const auto stop = end == std::string_view::npos ? html.size() : end;
        value = decode_entities(html.substr(i, stop - i));
        i = end == std::string_view::npos ? html.size() : end + 1;
      } else {
        const auto value_start = i;
        while (i < html.size() && !is_space(html[i]) && html[i] != '>') ++i;
        value = decode_entities(html.substr(value_start, i - value_start));
      }
    }
    tag.attributes.emplace(std::move(attr), std::move(value));
  }
  pos = html.size();
  return tag;
}

bool is_comment_section(const Tag& tag) {
  const auto has_token = [&](const char* attr) {
    const auto it = tag.attributes.find(attr);
    if (it == tag.attributes.end()) return false;
    std::string_view rest = it->second;
    while (!rest.empty()) {
      const auto space = rest.find(' ');
      const auto token = rest.substr(0, space);
      if (token == "comments" || token == "comment-section") return true;
      if (space == std::string_view::npos) break;
      rest.remove_prefix(space + 1);
    }
    return false;
  };
  return has_token("id") || has_token("class");
}

struct OpenElement {
  std::string name;
  bool article = false;
  bool excluded = false;
};

}  // namespace

std::vector<EntityKey> extract_wiki_links(std::string_view html, std::string_view article_id) {
  std::vector<EntityKey> links;
  std::set<EntityKey> seen;
  std::vector<OpenElement> stack;
  int article_depth = 0;
  int excluded_depth = 0;

  std::size_t pos = 0;
  while ((pos = html.find('<', pos)) != std::string_view::npos) {
    if (html.substr(pos, 4) == "<!--") {
      const auto end = html.find("-->", pos + 4);
      pos = end == std::string_view::npos ? html.size() : end + 3;
      continue;
    }
    if (pos + 1 < html.size() && (html[pos + 1] == '!' || html[pos + 1] == '?')) {
      const auto end = html.find('>', pos);
      pos = end == std::string_view::npos ? html.size() : end + 1;
      continue;
    }
    auto tag = read_tag(html, pos);
    if (!tag) {
      ++pos;
      continue;
    }
    if (tag->closing) {
      const auto it = std::find_if(stack.rbegin(), stack.rend(),
                                   [&](const OpenElement& e) { return e.name == tag->name; });
      if (it == stack.rend()) continue;  // stray close tag
      const auto keep = static_cast<std::size_t>(stack.rend() - it) - 1;
      while (stack.size() > keep) {
        article_depth -= stack.back().article ? 1 : 0;
        excluded_depth -= stack.back().excluded ? 1 : 0;
        stack.pop_back();
      }
      continue;
    }

    if (tag->name == "a" && article_depth > 0 && excluded_depth == 0) {
      if (const auto href = tag->attributes.find("href"); href != tag->attributes.end()) {
        try {
          auto key = canonicalize_url(href->second);
          if (seen.insert(key).second) links.push_back(std::move(key));
        } catch (const NotAWikiPage&) {
        }
      }
    }

    if (one_of(tag->name, kRawTextElements)) {
      const std::string close = "</" + tag->name;
      const auto it = std::search(html.begin() + static_cast<std::ptrdiff_t>(pos), html.end(), close.begin(),
                                  close.end(), [](char a, char b) {
                                    return std::tolower(static_cast<unsigned char>(a)) == b;
                                  });
      pos = static_cast<std::size_t>(it - html.begin());
      continue;
    }
    if (tag->self_closing || one_of(tag->name, kVoidElements)) continue;

    OpenElement element{tag->name};
    const auto id = tag->attributes.find("id");
    element.article = id != tag->attributes.end() && id->second == article_id;
    element.excluded = one_of(tag->name, kExcludedElements) || is_comment_section(*tag);
    article_depth += element.article ? 1 : 0;
    excluded_depth += element.excluded ? 1 : 0;
    stack.push_back(std::move(element));
  }
  return links;
}

// ---------------------------------------------------------------------------

std::optional<EntityKind> WikiScheme::kind_by_namespace(const EntityKey& key) const {
  if (key.ns() == film_namespace) return EntityKind::Film;
  if (trope_namespaces.contains(key.ns())) return EntityKind::Trope;
  return std::nullopt;
}

bool KindRegistry::add(const EntityKey& key, EntityKind kind) {
  const auto [it, inserted] = kinds_.try_emplace(key, kind);
  if (!inserted && it->second != kind) {
    throw KindConflict("'" + key.str() + "' is already registered as " + std::string(to_string(it->second)));
  }
  if (inserted) titles_[key.title()].insert(key);
  return inserted;
}

std::optional<EntityKind> KindRegistry::kind_of(const EntityKey& key) const {
  const auto it = kinds_.find(key);
  if (it == kinds_.end()) return std::nullopt;
  return it->second;
}

std::vector<EntityKey> KindRegistry::with_title(const std::string& title) const {
  const auto it = titles_.find(title);
  if (it == titles_.end()) return {};
  return {it->second.begin(), it->second.end()};
}

std::string_view to_string(PageKind kind) {
  switch (kind) {
    case PageKind::FilmPage:
      return "FilmPage";
    case PageKind::TropePage:
      return "TropePage";
    case PageKind::PaginationPage:
      return "PaginationPage";
    case PageKind::IndexPage:
      return "IndexPage";
    case PageKind::Other:
      return "Other";
  }
  return "?";
}

PageClass classify_page(const EntityKey& page, const KindRegistry& known, const WikiScheme& scheme) {
  if (scheme.index_seeds.contains(page)) return PageClass{PageKind::IndexPage, std::nullopt, {}};
  if (const auto kind = scheme.kind_by_namespace(page)) {
    return PageClass{*kind == EntityKind::Film ? PageKind::FilmPage : PageKind::TropePage, std::nullopt, {}};
  }

  std::optional<EntityKey> film_owner;
  std::optional<EntityKey> trope_owner;
  for (const auto& candidate : known.with_title(page.ns())) {
    const auto kind = known.kind_of(candidate);
    if (kind == EntityKind::Trope && !trope_owner) trope_owner = candidate;
    if (kind == EntityKind::Film && !film_owner) film_owner = candidate;
  }
  if (trope_owner) {
    PageClass result{PageKind::PaginationPage, trope_owner, {}};
    if (film_owner) {
      result.diagnostic = "namespace '" + page.ns() + "' matches film " + film_owner->str() + " and trope " +
                          trope_owner->str() + "; attributed to the trope";
    }
    return result;
  }
  if (film_owner) return PageClass{PageKind::PaginationPage, film_owner, {}};
  return PageClass{PageKind::Other, std::nullopt, {}};
}

ParsedPage parse_page(const EntityKey& page, std::string_view html, const KindRegistry& known,
                      const WikiScheme& scheme) {
  return ParsedPage{page, classify_page(page, known, scheme), extract_wiki_links(html, scheme.article_id)};
}

std::vector<ExtractedRelation> extract_relations(const ParsedPage& parsed, const WikiScheme& scheme) {
  std::vector<ExtractedRelation> out;
  EntityKey subject = parsed.page;
  EvidenceSource source;
  EntityKind subject_kind;
  switch (parsed.kind.kind) {
    case PageKind::FilmPage:
      source = EvidenceSource::FilmPage;
      subject_kind = EntityKind::Film;
      break;
    case PageKind::TropePage:
      source = EvidenceSource::TropePage;
      subject_kind = EntityKind::Trope;
      break;
    case PageKind::PaginationPage: {
      const auto owner_kind = parsed.kind.owner ? scheme.kind_by_namespace(*parsed.kind.owner) : std::nullopt;
      if (!owner_kind) {
        throw UnownedPagination("pagination page " + parsed.page.str() + " has no film or trope owner");
      }
      subject = *parsed.kind.owner;
      source = EvidenceSource::PaginationPage;
      subject_kind = *owner_kind;
      break;
    }
    default:
      return out;
  }

  const RelationEvidence evidence{source, parsed.page};
  const EntityKind wanted = subject_kind == EntityKind::Film ? EntityKind::Trope : EntityKind::Film;
  for (const auto& link : parsed.outlinks) {
    if (scheme.kind_by_namespace(link) != wanted) continue;
    if (subject_kind == EntityKind::Film) {
      out.push_back(ExtractedRelation{subject, link, evidence});
    } else {
      out.push_back(ExtractedRelation{link, subject, evidence});
    }
  }
  return out;
}

}  // namespace tropescope
