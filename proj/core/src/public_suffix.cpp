#include "honeygrid/public_suffix.hpp"

#include <algorithm>
#include <unordered_set>

#include "strutil.hpp"

namespace honeygrid {

namespace {

// Multi-label public suffixes. ICANN second-level registries for the
// country codes that commonly show up in app host domains, plus the big
// shared-hosting platforms, where the interesting label is the customer's
// subdomain rather than the platform name.
constexpr std::string_view kMultiLabelSuffixes[] = {
    // United Kingdom
    "ac.uk", "co.uk", "gov.uk", "ltd.uk", "me.uk", "net.uk", "nhs.uk",
    "org.uk", "plc.uk", "sch.uk",
    // Australia / New Zealand
    "asn.au", "com.au", "edu.au", "gov.au", "id.au", "net.au", "org.au",
    "ac.nz", "co.nz", "geek.nz", "govt.nz", "net.nz", "org.nz", "school.nz",
    // Brazil
    "adv.br", "art.br", "com.br", "edu.br", "eng.br", "gov.br", "ind.br",
    "inf.br", "net.br", "org.br",
    // Taiwan / China / Hong Kong / Singapore / Malaysia
    "com.tw", "edu.tw", "gov.tw", "idv.tw", "net.tw", "org.tw",
    "ac.cn", "com.cn", "edu.cn", "gov.cn", "net.cn", "org.cn",
    "com.hk", "edu.hk", "gov.hk", "idv.hk", "net.hk", "org.hk",
    "com.sg", "edu.sg", "gov.sg", "net.sg", "org.sg", "per.sg",
    "com.my", "edu.my", "gov.my", "net.my", "org.my",
    // Japan / Korea
    "ac.jp", "ad.jp", "co.jp", "ed.jp", "go.jp", "gr.jp", "lg.jp", "ne.jp",
    "or.jp",
    "ac.kr", "co.kr", "go.kr", "ne.kr", "or.kr", "pe.kr", "re.kr",
    // India / Pakistan / Sri Lanka
    "ac.in", "co.in", "edu.in", "firm.in", "gen.in", "gov.in", "ind.in",
    "net.in", "nic.in", "org.in", "res.in",
    "com.pk", "edu.pk", "gov.pk", "net.pk", "org.pk",
    "com.lk", "edu.lk", "gov.lk", "org.lk",
    // Southeast Asia
    "ac.id", "biz.id", "co.id", "go.id", "my.id", "or.id", "sch.id", "web.id",
    "com.ph", "edu.ph", "gov.ph", "net.ph", "org.ph",
    "com.vn", "edu.vn", "gov.vn", "net.vn", "org.vn",
    "ac.th", "co.th", "go.th", "in.th", "net.th", "or.th",
    // Turkey / Poland / Ukraine / Russia
    "bel.tr", "com.tr", "edu.tr", "gen.tr", "gov.tr", "net.tr", "org.tr",
    "web.tr",
    "com.pl", "edu.pl", "gov.pl", "net.pl", "org.pl", "waw.pl",
    "com.ua", "edu.ua", "gov.ua", "in.ua", "kiev.ua", "net.ua", "org.ua",
    "com.ru", "msk.ru", "net.ru", "org.ru", "spb.ru",
    // Middle East
    "ac.il", "co.il", "gov.il", "muni.il", "net.il", "org.il",
    "com.sa", "edu.sa", "gov.sa", "net.sa", "org.sa",
    "ac.ae", "co.ae", "com.ae", "gov.ae", "net.ae", "org.ae",
    "com.eg", "edu.eg", "gov.eg", "net.eg", "org.eg",
    "com.jo", "com.kw", "com.lb", "com.om", "com.qa",
    // Africa
    "ac.za", "co.za", "gov.za", "net.za", "org.za", "web.za",
    "com.ng", "edu.ng", "gov.ng", "net.ng", "org.ng",
    "ac.ke", "co.ke", "go.ke", "ne.ke", "or.ke",
    "co.tz", "co.ug", "co.zw", "com.gh", "com.et",
    // Latin America
    "com.mx", "edu.mx", "gob.mx", "net.mx", "org.mx",
    "com.ar", "edu.ar", "gob.ar", "gov.ar", "net.ar", "org.ar",
    "com.co", "edu.co", "gov.co", "net.co", "nom.co", "org.co",
    "com.pe", "edu.pe", "gob.pe", "net.pe", "nom.pe", "org.pe",
    "com.ve", "co.ve", "gob.ve", "net.ve", "org.ve",
    "com.ec", "com.bo", "com.py", "com.uy", "com.do", "com.gt", "com.sv",
    "com.ni", "com.hn", "com.pa", "com.pr", "com.cu",
    "com.cl", "gob.cl",
    // Europe (second-level registries)
    "asso.fr", "com.fr", "gouv.fr", "nom.fr", "prd.fr", "tm.fr",
    "ac.at", "co.at", "gv.at", "or.at",
    "com.es", "edu.es", "gob.es", "nom.es", "org.es",
    "com.pt", "edu.pt", "gov.pt", "net.pt", "org.pt",
    "com.gr", "edu.gr", "gov.gr", "net.gr", "org.gr",
    "com.ro", "org.ro", "tm.ro",
    "com.mt", "edu.mt", "net.mt", "org.mt",
    "com.cy", "org.cy", "net.cy",
    "com.lv", "edu.lv", "gov.lv", "net.lv", "org.lv",
    "co.ee", "com.ee", "edu.ee", "org.ee",
    "co.hu", "info.hu", "org.hu",
    "co.im", "com.gi", "co.gg", "co.je",
    // North America misc
    "gc.ca", "on.ca", "qc.ca", "bc.ca", "ab.ca",
    // Shared hosting and app platforms: the customer subdomain is the
    // meaningful token, the platform name is not.
    "appspot.com", "azurewebsites.net", "blogspot.com", "cloudfront.net",
    "firebaseapp.com", "github.io", "gitlab.io", "herokuapp.com",
    "myshopify.com", "netlify.app", "onrender.com", "pages.dev", "repl.co",
    "vercel.app", "web.app", "wordpress.com",
};

// Country codes where every second-level label is itself a registry
// (the suffix list's "*.tld" rules), with its lone exception.
constexpr std::string_view kWildcardTlds[] = {
    "bd", "ck", "er", "fk", "jm", "kh", "mm", "np", "pg",
};
constexpr std::string_view kWildcardExceptions[] = {"www.ck"};

const std::unordered_set<std::string_view>& multi_label_set() {
    static const std::unordered_set<std::string_view> set(
        std::begin(kMultiLabelSuffixes), std::end(kMultiLabelSuffixes));
    return set;
}

bool is_wildcard_tld(std::string_view tld) {
    return std::find(std::begin(kWildcardTlds), std::end(kWildcardTlds), tld) !=
           std::end(kWildcardTlds);
}

bool is_wildcard_exception(std::string_view two_labels) {
    return std::find(std::begin(kWildcardExceptions), std::end(kWildcardExceptions),
                     two_labels) != std::end(kWildcardExceptions);
}

std::string_view strip_trailing_dot(std::string_view domain) {
    if (!domain.empty() && domain.back() == '.') domain.remove_suffix(1);
    return domain;
}

// Offsets of each label start within the domain.
std::vector<std::size_t> label_starts(std::string_view domain) {
    std::vector<std::size_t> starts{0};
    for (std::size_t i = 0; i < domain.size(); ++i) {
        if (domain[i] == '.') starts.push_back(i + 1);
    }
    return starts;
}

} // namespace

std::string_view public_suffix(std::string_view domain) {
    domain = strip_trailing_dot(domain);
    if (domain.empty()) return domain;

    std::string lowered = detail::to_lower(std::string(domain));
    std::vector<std::size_t> starts = label_starts(lowered);

    // Longest candidate first; the whole domain may itself be a suffix.
    for (std::size_t start : starts) {
        std::string_view candidate(lowered.data() + start, lowered.size() - start);
        if (multi_label_set().count(candidate) != 0) {
            return domain.substr(start);
        }
        std::size_t dot = candidate.find('.');
        if (dot != std::string_view::npos &&
            candidate.find('.', dot + 1) == std::string_view::npos &&
            is_wildcard_tld(candidate.substr(dot + 1)) &&
            !is_wildcard_exception(candidate)) {
            return domain.substr(start);
        }
    }
    return domain.substr(starts.back());
}

std::string_view registrable_domain(std::string_view domain) {
    domain = strip_trailing_dot(domain);
    std::string_view suffix = public_suffix(domain);
    if (suffix.size() >= domain.size()) return domain;

    // One label left of the suffix: scan back past the suffix's own dot.
    std::size_t end = domain.size() - suffix.size() - 1;
    std::size_t dot = domain.rfind('.', end == 0 ? 0 : end - 1);
    return dot == std::string_view::npos ? domain : domain.substr(dot + 1);
}

std::vector<std::string> domain_labels(std::string_view domain) {
    domain = strip_trailing_dot(domain);
    std::string_view suffix = public_suffix(domain);

    std::vector<std::string> labels;
    std::string_view head =
        suffix.size() >= domain.size() ? std::string_view{}
                                       : domain.substr(0, domain.size() - suffix.size() - 1);
    while (!head.empty()) {
        std::size_t dot = head.find('.');
        std::string_view label = dot == std::string_view::npos ? head : head.substr(0, dot);
        if (!label.empty()) labels.push_back(detail::to_lower(std::string(label)));
        if (dot == std::string_view::npos) break;
        head.remove_prefix(dot + 1);
    }
    return labels;
}

} // namespace honeygrid
