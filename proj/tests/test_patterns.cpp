#include <gtest/gtest.h>

#include <algorithm>

#include "corpus.hpp"
#include "generators.hpp"
#include "metastar/metastar.hpp"

using namespace metastar;

namespace {

const std::string kEx = "http://example.org/";
Iri ex(const std::string& local) { return Iri(kEx + local); }

const Iri kWasDerivedFrom("http://www.w3.org/ns/prov#wasDerivedFrom");
const Iri kDate("http://purl.org/dc/terms/date");
const Iri kCaption("http://dbpedia.org/property/caption");
const Iri kReplaced(vocab::ex::replaced);
const Iri kReplaceBy(vocab::ex::replace_subject_by);

std::vector<std::pair<Iri, Term>> dbpedia_prov() {
  return {{kWasDerivedFrom, ex("article")}, {kDate, Literal("2022-05-21")}};
}

Dataset with(Dataset ds, const std::vector<Quad>& extra) {
  for (const auto& q : extra) ds.insert(q);
  return ds;
}

bool subset(const Dataset& a, const Dataset& b) {
  for (const auto& q : a.quads())
    if (!b.contains(q)) return false;
  return true;
}

NaryShape conformance_shape() {
  return {ex("ConformanceStatement"), ex("hasConformanceStatement"), ex("conformingTo"),
          ex("conformsTo"), "/record"};
}

NaryShape subject_shape() {
  return {ex("SubjectAssignment"), ex("hasSubject"), ex("hasHeading"),
          Iri("http://purl.org/dc/elements/1.1/subject"), "/record"};
}

}  // namespace

// ---------------------------------------------------------------------------

TEST(DetectMeta, CorpusExamples) {
  auto star = detect_meta(mtest::listing("dcat_star"));
  EXPECT_EQ(star.subject_quoted_count, 4u);
  EXPECT_EQ(star.object_quoted_count, 0u);
  EXPECT_EQ(star.named_graph_count, 0u);
  EXPECT_TRUE(star.has_meta_level);

  auto ng = detect_meta(mtest::listing("dbpedia_named_graph"));
  EXPECT_EQ(ng.named_graph_count, 1u);
  ASSERT_EQ(ng.graphs_with_meta.size(), 1u);
  EXPECT_EQ(ng.graphs_with_meta[0], GraphName(ex("data")));
  EXPECT_TRUE(ng.has_meta_level);

  auto plain = detect_meta(mtest::listing("dbpedia_mixed"));
  EXPECT_FALSE(plain.has_meta_level);
  EXPECT_EQ(plain.subject_quoted_count + plain.object_quoted_count + plain.named_graph_count, 0u);

  auto replaced = detect_meta(mtest::listing("dbpedia_replaced"));
  EXPECT_EQ(replaced.subject_quoted_count, 1u);
  EXPECT_EQ(replaced.object_quoted_count, 1u);
}

TEST(DetectMeta, UndescribedGraphIsNotMeta) {
  Dataset ds;
  ds.insert(Quad(ex("s"), ex("p"), ex("o"), GraphName(ex("g"))));
  ds.insert(Quad(ex("h"), ex("p"), ex("g")));
  auto r = detect_meta(ds);
  EXPECT_EQ(r.named_graph_count, 1u);
  EXPECT_TRUE(r.graphs_with_meta.empty());
  EXPECT_TRUE(r.has_meta_level);
}

TEST(DetectMeta, AgreesWithOracleProperty) {
  mtest::Generator gen(606);
  for (int i = 0; i < 200; ++i) {
    Dataset ds = gen.dataset();
    // Make graph labels appear as default-graph subjects now and then.
    for (const auto& g : ds.graph_names()) {
      if (gen.chance(0.5)) ds.insert(Quad(*g.to_term(), ex("describes"), Literal("x")));
    }
    auto got = detect_meta(ds);
    auto want = mtest::oracle_detect(ds);
    EXPECT_EQ(got.subject_quoted_count, want.subject_quoted_count);
    EXPECT_EQ(got.object_quoted_count, want.object_quoted_count);
    EXPECT_EQ(got.named_graph_count, want.named_graph_count);
    EXPECT_EQ(got.graphs_with_meta, want.graphs_with_meta);
    EXPECT_EQ(got.has_meta_level, want.has_meta_level);
  }
}

// ---------------------------------------------------------------------------

TEST(WrapProvenance, ResubjectedFixtureMatchesNamedGraphListing) {
  Dataset in = mtest::load("fixtures/dbpedia_mixed_resubjected.trig").dataset;
  auto r = wrap_provenance(in, {Term(ex("entity"))}, GraphName(ex("data")), dbpedia_prov());
  EXPECT_EQ(r.moved, 2u);
  EXPECT_EQ(r.absorbed, 2u);
  EXPECT_FALSE(r.vacuous);
  EXPECT_TRUE(isomorphic(r.dataset, mtest::listing("dbpedia_named_graph")));
}

TEST(WrapProvenance, MixedListingKeepsExcludedPredicate) {
  const Iri page_id("http://dbpedia.org/ontology/wikiPageID");
  auto r = wrap_provenance(mtest::listing("dbpedia_mixed"), {Term(ex("entity"))},
                           GraphName(ex("data")), dbpedia_prov(), {page_id});
  EXPECT_EQ(r.moved, 2u);
  EXPECT_TRUE(r.dataset.contains(Quad(ex("entity"), page_id, Literal("123"))));
  EXPECT_FALSE(isomorphic(r.dataset, mtest::listing("dbpedia_named_graph")));
}

TEST(WrapProvenance, Errors) {
  Dataset ng = mtest::listing("dbpedia_named_graph");
  EXPECT_THROW(wrap_provenance(ng, {Term(ex("entity"))}, GraphName(ex("data")), dbpedia_prov()),
               GraphNameCollision);
  EXPECT_THROW(wrap_provenance(ng, {Term(ex("entity"))}, GraphName{}, dbpedia_prov()),
               std::invalid_argument);
  EXPECT_THROW(wrap_provenance(ng, {}, GraphName(ex("fresh")), dbpedia_prov()), std::invalid_argument);
  auto r = wrap_provenance(ng, {Term(ex("nobody"))}, GraphName(ex("fresh")), dbpedia_prov());
  EXPECT_TRUE(r.vacuous);
}

// Every input quad survives, moves into the graph, or is absorbed by an
// identical graph-level statement. Nothing else is added.
TEST(WrapProvenance, ConservationProperty) {
  mtest::Generator gen(1717, {80, 2, 2, 4, 6});
  const GraphName g(ex("provgraph"));
  for (int i = 0; i < 150; ++i) {
    Dataset in = gen.dataset();
    if (in.graph_size(g) != 0) continue;
    std::set<Term> subjects;
    for (const auto& q : in.graph_quads(GraphName{}))
      if (gen.chance(0.3)) subjects.insert(q.subject());
    if (subjects.empty()) subjects.insert(Term(ex("nobody")));
    std::vector<std::pair<Iri, Term>> prov{{kWasDerivedFrom, ex("src")}};
    auto defaults = in.graph_quads(GraphName{});
    if (!defaults.empty() && gen.chance(0.5)) {
      const auto& q = defaults[gen.uniform(0, defaults.size() - 1)];
      prov.emplace_back(q.predicate(), q.object());
    }
    auto r = wrap_provenance(in, subjects, g, prov);
    const Term label = *g.to_term();
    std::size_t moved = 0, absorbed = 0;
    for (const auto& q : in.quads()) {
      const bool targeted = q.graph.is_default() && subjects.count(q.subject());
      if (!targeted) {
        EXPECT_TRUE(r.dataset.contains(q));
        continue;
      }
      const bool is_prov = std::find(prov.begin(), prov.end(),
                                     std::make_pair(q.predicate(), q.object())) != prov.end();
      if (is_prov) {
        ++absorbed;
        EXPECT_TRUE(r.dataset.contains(Quad(label, q.predicate(), q.object())));
      } else {
        ++moved;
        EXPECT_TRUE(r.dataset.contains(Quad(q.triple, g)));
      }
    }
    EXPECT_EQ(r.moved, moved);
    EXPECT_EQ(r.absorbed, absorbed);
    for (const auto& q : r.dataset.quads()) {
      bool from_input = in.contains(q) || (q.graph == g && in.contains(Quad(q.triple, GraphName{})));
      bool prov_quad = q.graph.is_default() && q.subject() == label &&
                       std::find(prov.begin(), prov.end(), std::make_pair(q.predicate(), q.object())) !=
                           prov.end();
      EXPECT_TRUE(from_input || prov_quad) << to_string(q.triple) << " in " << to_string(q.graph);
    }
  }
}

// ---------------------------------------------------------------------------

TEST(Annotate, ConformanceConfidence) {
  Dataset base;
  Triple t(ex("A"), ex("conformsTo"), ex("B"));
  base.insert(Quad(t, GraphName{}));
  Dataset out = annotate(base, t, {{ex("confidence"), Literal("0.8", Iri(vocab::xsd::decimal))}}, true);
  EXPECT_EQ(out.size(), 2u);
  EXPECT_EQ(out, mtest::listing("conforms_star"));
  EXPECT_EQ(annotate(Dataset{}, t, {{ex("confidence"), Literal("0.8", Iri(vocab::xsd::decimal))}}, true),
            out);
}

TEST(Annotate, GeoNamesValidity) {
  const Iri place("https://sws.geonames.org/2940132/");
  Triple t(place, Iri("http://www.geonames.org/ontology#alternateName"),
           Literal::with_language("Karl-Marx-Stadt", "de"));
  Dataset base;
  base.insert(Quad(t, GraphName{}));
  Dataset out = annotate(base, t,
                         {{ex("valid_from"), Literal("09.05.1953", Iri(vocab::xsd::date))},
                          {ex("valid_to"), Literal("01.06.1990", Iri(vocab::xsd::date))}},
                         false);
  EXPECT_EQ(out.size(), 3u);
  EXPECT_EQ(out, mtest::listing("geonames_star"));
}

TEST(Annotate, UnassertedTargetStaysUnasserted) {
  Triple t(ex("A"), ex("conformsTo"), ex("B"));
  Dataset out = annotate(Dataset{}, t, {{ex("confidence"), Literal("0.8")}}, false);
  EXPECT_EQ(out.size(), 1u);
  EXPECT_FALSE(out.contains(Quad(t, GraphName{})));
  EXPECT_EQ(annotate(out, t, {}, false), out);
}

TEST(Annotate, MonotoneProperty) {
  mtest::Generator gen(321);
  for (int i = 0; i < 150; ++i) {
    Dataset in = gen.dataset();
    Triple t(gen.subject(2), gen.predicate(), gen.object(2));
    std::vector<std::pair<Iri, Term>> ann;
    for (std::size_t k = gen.uniform(0, 3); k > 0; --k) ann.emplace_back(gen.predicate(), gen.object(1));
    bool assert_target = gen.chance(0.5);
    Dataset out = annotate(in, t, ann, assert_target);
    EXPECT_TRUE(subset(in, out));
    EXPECT_EQ(out.contains(Quad(t, GraphName{})), assert_target || in.contains(Quad(t, GraphName{})));
    for (const auto& [p, o] : ann) EXPECT_TRUE(out.contains(Quad(quote(t), p, o)));
    EXPECT_LE(out.size(), in.size() + ann.size() + 1);
  }
}

// ---------------------------------------------------------------------------

TEST(SubjectReplacement, CaptionFixProducesReplacedListing) {
  auto [out, report] = apply_subject_replacements(mtest::listing("dbpedia_caption"));
  EXPECT_EQ(out, mtest::listing("dbpedia_replaced"));
  ASSERT_EQ(report.applied.size(), 1u);
  EXPECT_EQ(report.applied[0].first, Quad(ex("entity"), kCaption, Literal("Portrait of X")));
  EXPECT_EQ(report.applied[0].second, Quad(ex("thumbnail"), kCaption, Literal("Portrait of X")));
  ASSERT_EQ(report.lineage.size(), 1u);
  EXPECT_TRUE(report.conflicts.empty());
  EXPECT_FALSE(report.aborted());
}

TEST(SubjectReplacement, NoDirectiveLeavesDatasetUnchanged) {
  Dataset fixed = mtest::listing("dbpedia_thumbnail_fixed");
  auto [out, report] = apply_subject_replacements(fixed);
  EXPECT_EQ(out, fixed);
  EXPECT_TRUE(report.applied.empty());
}

TEST(SubjectReplacement, Idempotent) {
  auto once = apply_subject_replacements(mtest::listing("dbpedia_caption")).first;
  auto [twice, report] = apply_subject_replacements(once);
  EXPECT_EQ(twice, once);
  EXPECT_TRUE(report.applied.empty());
}

TEST(SubjectReplacement, ConflictAborts) {
  Dataset ds = mtest::listing("dbpedia_caption");
  Triple t(ex("entity"), kCaption, Literal("Portrait of X"));
  ds.insert(Quad(quote(t), kReplaceBy, ex("other")));
  auto [out, report] = apply_subject_replacements(ds);
  EXPECT_TRUE(report.aborted());
  ASSERT_EQ(report.conflicts.size(), 1u);
  EXPECT_EQ(report.conflicts[0], t);
  EXPECT_EQ(out, ds);
}

TEST(SubjectReplacement, VacuousAndInvalidDirectives) {
  Dataset ds;
  Triple unasserted(ex("a"), ex("p"), ex("b"));
  Triple asserted(ex("c"), ex("p"), ex("d"));
  ds.insert(Quad(quote(unasserted), kReplaceBy, ex("z")));
  ds.insert(Quad(asserted, GraphName{}));
  ds.insert(Quad(quote(asserted), kReplaceBy, Literal("not a subject")));
  auto [out, report] = apply_subject_replacements(ds);
  ASSERT_EQ(report.vacuous.size(), 1u);
  EXPECT_EQ(report.vacuous[0], unasserted);
  ASSERT_EQ(report.invalid.size(), 1u);
  EXPECT_TRUE(out.contains(Quad(asserted, GraphName{})));
  EXPECT_TRUE(out.contains(report.invalid[0]));
  EXPECT_EQ(out.size(), 2u);
}

TEST(SubjectReplacement, ScopedToGraph) {
  GraphName g(ex("g"));
  Dataset ds;
  Triple t(ex("a"), ex("p"), ex("b"));
  ds.insert(Quad(t, g));
  ds.insert(Quad(quote(t), kReplaceBy, ex("z"), g));
  EXPECT_TRUE(apply_subject_replacements(ds).second.applied.empty());
  auto [out, report] = apply_subject_replacements(ds, g);
  EXPECT_EQ(report.applied.size(), 1u);
  EXPECT_TRUE(out.contains(Quad(ex("z"), ex("p"), ex("b"), g)));
}

TEST(SubjectReplacement, IdempotenceProperty) {
  mtest::Generator gen(4040, {40, 2, 1, 4, 6});
  for (int i = 0; i < 150; ++i) {
    Dataset ds = gen.dataset();
    // Add directives over some asserted triples.
    for (const auto& q : ds.graph_quads(GraphName{})) {
      if (gen.chance(0.2) && !q.subject().is_quoted())
        ds.insert(Quad(quote(q.triple), kReplaceBy, Term(gen.iri())));
    }
    auto [once, report] = apply_subject_replacements(ds);
    if (report.aborted()) {
      EXPECT_EQ(once, ds);
      continue;
    }
    EXPECT_EQ(apply_subject_replacements(once).first, once) << "case " << i;
  }
}

// ---------------------------------------------------------------------------

TEST(Lineage, ReplacedListingHasOneChain) {
  auto r = replacement_lineage(mtest::listing("dbpedia_replaced"));
  ASSERT_EQ(r.chains.size(), 1u);
  ASSERT_EQ(r.chains[0].size(), 2u);
  EXPECT_EQ(r.chains[0][0], Triple(ex("thumbnail"), kCaption, Literal("Portrait of X")));
  EXPECT_EQ(r.chains[0][1], Triple(ex("entity"), kCaption, Literal("Portrait of X")));
  EXPECT_TRUE(r.cycles.empty());
}

TEST(Lineage, EmptyAndChainsAndCycles) {
  EXPECT_TRUE(replacement_lineage(Dataset{}).chains.empty());

  auto t = [](const std::string& s) { return Triple(ex(s), ex("p"), ex("o")); };
  Dataset chain;
  chain.insert(Quad(quote(t("c")), kReplaced, quote(t("b"))));
  chain.insert(Quad(quote(t("b")), kReplaced, quote(t("a"))));
  auto r = replacement_lineage(chain);
  ASSERT_EQ(r.chains.size(), 1u);
  EXPECT_EQ(r.chains[0], (std::vector<Triple>{t("c"), t("b"), t("a")}));

  Dataset cycle;
  cycle.insert(Quad(quote(t("x")), kReplaced, quote(t("y"))));
  cycle.insert(Quad(quote(t("y")), kReplaced, quote(t("z"))));
  cycle.insert(Quad(quote(t("z")), kReplaced, quote(t("x"))));
  auto rc = replacement_lineage(cycle);
  EXPECT_TRUE(rc.chains.empty());
  ASSERT_EQ(rc.cycles.size(), 1u);
  EXPECT_EQ(rc.cycles[0], (std::vector<Triple>{t("x"), t("y"), t("z")}));

  // A chain head feeding into a cycle.
  cycle.insert(Quad(quote(t("w")), kReplaced, quote(t("x"))));
  auto rm = replacement_lineage(cycle);
  EXPECT_EQ(rm.cycles.size(), 1u);
  ASSERT_EQ(rm.chains.size(), 1u);
  EXPECT_EQ(rm.chains[0].front(), t("w"));
}

TEST(Lineage, RepeatedFixesBuildChains) {
  Dataset ds;
  Triple first(ex("e1"), kCaption, Literal("x"));
  ds.insert(Quad(first, GraphName{}));
  for (int step = 2; step <= 4; ++step) {
    Triple current(ex("e" + std::to_string(step - 1)), kCaption, Literal("x"));
    ds.insert(Quad(quote(current), kReplaceBy, ex("e" + std::to_string(step))));
    ds = apply_subject_replacements(ds).first;
  }
  auto r = replacement_lineage(ds);
  ASSERT_EQ(r.chains.size(), 1u);
  EXPECT_EQ(r.chains[0].size(), 4u);
  EXPECT_EQ(r.chains[0].back(), first);
}

// ---------------------------------------------------------------------------

TEST(Nary, LiftDcatRecord) {
  Dataset lifted = lift_nary_to_star(mtest::listing("dcat_nary"), mtest::dcat_shape());
  Dataset expected = with(mtest::listing("dcat_star"),
                          {Quad(ex("dataset"), Iri(vocab::rdf::type), Iri("http://www.w3.org/ns/dcat#Dataset"))});
  EXPECT_EQ(lifted, expected);
}

TEST(Nary, LowerDcatStarMintsRecord) {
  Dataset lowered = lower_star_to_nary(mtest::listing("dcat_star"), mtest::dcat_shape());
  const Iri record("http://example.org/dataset/record");
  EXPECT_EQ(lowered.size(), 6u);
  EXPECT_TRUE(lowered.contains(Quad(ex("catalog"), Iri("http://www.w3.org/ns/dcat#record"), record)));
  EXPECT_TRUE(lowered.contains(Quad(record, Iri("http://xmlns.com/foaf/0.1/primaryTopic"), ex("dataset"))));
  EXPECT_EQ(detect_meta(lowered).subject_quoted_count, 0u);
  // Inverse modulo the minted record name.
  Dataset nary = mtest::listing("dcat_nary");
  Dataset renamed;
  for (const auto& q : lower_star_to_nary(lift_nary_to_star(nary, mtest::dcat_shape()), mtest::dcat_shape()).quads()) {
    auto swap = [&](const Term& t) { return t == Term(record) ? Term(ex("catalogRecord")) : t; };
    renamed.insert(Quad(swap(q.subject()), q.predicate(), swap(q.object()), q.graph));
  }
  EXPECT_EQ(renamed, nary);
}

TEST(Nary, ConformanceAndSubjectListings) {
  Dataset conforms = lift_nary_to_star(mtest::listing("conforms_nary"), conformance_shape());
  Triple t(ex("A"), ex("conformsTo"), ex("B"));
  EXPECT_EQ(conforms, with(mtest::listing("conforms_star"),
                           {Quad(quote(t), Iri(vocab::rdf::type), ex("ConformanceStatement"))}));
  EXPECT_EQ(lift_nary_to_star(mtest::listing("subject_nary"), subject_shape()), mtest::listing("subject_star"));
  // Literal targets cannot mint a record IRI, so lowering leaves them alone.
  Dataset star = mtest::listing("subject_star");
  EXPECT_EQ(lower_star_to_nary(star, subject_shape()), star);
}

TEST(Nary, Errors) {
  NaryShape bad = mtest::dcat_shape();
  bad.topic_pred = bad.link_pred;
  EXPECT_THROW(lower_star_to_nary(Dataset{}, bad), std::invalid_argument);

  const NaryShape shape = mtest::dcat_shape();
  Dataset clash = mtest::listing("dcat_star");
  clash.insert(Quad(Iri("http://example.org/dataset/record"), ex("p"), ex("o")));
  EXPECT_THROW(lower_star_to_nary(clash, shape), MintCollision);

  Dataset twice;
  Iri t("http://example.org/t");
  twice.insert(Quad(quote(Triple(ex("h1"), shape.star_pred, t)), ex("p"), ex("o")));
  twice.insert(Quad(quote(Triple(ex("h2"), shape.star_pred, t)), ex("p"), ex("o")));
  EXPECT_THROW(lower_star_to_nary(twice, shape), MintCollision);

  Dataset no_topic;
  no_topic.insert(Quad(ex("h"), shape.link_pred, ex("r")));
  EXPECT_THROW(lift_nary_to_star(no_topic, shape), MalformedRecord);
  Dataset two_topics = no_topic;
  two_topics.insert(Quad(ex("r"), shape.topic_pred, ex("t1")));
  two_topics.insert(Quad(ex("r"), shape.topic_pred, ex("t2")));
  EXPECT_THROW(lift_nary_to_star(two_topics, shape), MalformedRecord);
}

TEST(Nary, InverseOnNormalFormsProperty) {
  mtest::Generator gen(9090);
  const NaryShape shape = mtest::dcat_shape();
  for (int i = 0; i < 200; ++i) {
    Dataset nary = mtest::nary_normal_form(gen, shape);
    Dataset star = lift_nary_to_star(nary, shape);
    EXPECT_EQ(lower_star_to_nary(star, shape), nary) << "case " << i;
    EXPECT_EQ(lift_nary_to_star(lower_star_to_nary(star, shape), shape), star) << "case " << i;
  }
}
