#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

#include "barron/error.hpp"
#include "barron/io.hpp"
#include "helpers.hpp"

using namespace barron;

TEST(Io, NetRoundTripBitExact) {
  const auto path = (std::filesystem::temp_directory_path() / "barron_io_net.json").string();
  const ShallowNet net(Activation::repu(3), testing_util::random_measure(4, 30, 77, 1.7));
  write_json_file(path, to_json(net));
  const ShallowNet back = net_from_json(read_json_file(path));
  EXPECT_EQ(back.measure, net.measure);
  EXPECT_TRUE(back.activation.same_as(net.activation));
  EXPECT_EQ(dump(to_json(back)), dump(to_json(net)));
  std::remove(path.c_str());
}

TEST(Io, FieldOrder) {
  DiscreteMeasure m(1);
  m.add({0.1}, 0.2, 0.3);
  const auto text = dump(to_json(ShallowNet(Activation::leaky_relu(0.01), m)));
  EXPECT_LT(text.find("\"activation\""), text.find("\"d\""));
  EXPECT_LT(text.find("\"d\""), text.find("\"atoms\""));
  EXPECT_LT(text.find("\"w\""), text.find("\"b\""));
  EXPECT_LT(text.find("\"b\""), text.find("\"mass\""));
  EXPECT_NE(text.find("\"alpha\": 0.01"), std::string::npos);
}

TEST(Io, ActivationErrors) {
  try {
    activation_from_json(json::parse(R"({"kind":"gelu"})"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownActivation);
  }
  EXPECT_THROW(activation_from_json(json::parse(R"({"kind":"custom"})")), Error);
  const auto custom = Activation::custom("c", [](int, double) { return 0.0; }, 1);
  EXPECT_THROW(to_json(custom), Error);
}

TEST(Io, MalformedNet) {
  EXPECT_THROW(net_from_json(json::parse(R"({"d":1,"atoms":[]})")), Error);
  try {
    net_from_json(json::parse(
        R"({"activation":{"kind":"relu"},"d":2,"atoms":[{"w":[1],"b":0,"mass":1}]})"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
  try {
    read_json_file("/nonexistent/net.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
}

TEST(Io, PolynomialAndSpectral) {
  const auto p = polynomial_from_json(
      json::parse(R"({"d":2,"s":2,"terms":[{"alpha":[1,1],"c":0.5},{"alpha":[0,0],"c":-1}]})"));
  EXPECT_EQ(p.coeffs.at({1, 1}), 0.5);
  EXPECT_EQ(polynomial_from_json(to_json(p)).coeffs, p.coeffs);
  EXPECT_THROW(polynomial_from_json(json::parse(R"({"d":1,"s":1,"terms":[{"alpha":[2],"c":1}]})")),
               Error);
  const auto rep = spectral_from_json(json::parse(
      R"({"d":1,"terms":[{"xi":[1],"re":0.5,"im":0.25},{"xi":[-1],"re":0.5,"im":-0.25}]})"));
  EXPECT_EQ(rep.terms().size(), 2u);
  EXPECT_EQ(spectral_from_json(to_json(rep)).terms()[0].c, rep.terms()[0].c);
}

TEST(Io, CertificateRoundTrip) {
  EmbeddingCertificate c;
  c.conversion = "repu_lower";
  c.source_norm = {NormKind::kRepu, 2, 1.69, 1.0, 1.3};
  c.target_norm = {NormKind::kRepu, 1, 3.69, 1.3, 2.6};
  c.constant = 3.0;
  c.quadrature = QuadratureSpec{QuadRule::kMidpoint, 64};
  c.notes = {"a", "b"};
  finalize_certificate(c);
  const auto j = to_json(c);
  const auto keys = std::vector<std::string>{"source_norm", "target_norm", "constant", "slack",
                                             "quadrature", "notes"};
  std::size_t i = 0;
  for (const auto& [k, v] : j.items()) {
    if (i < keys.size()) EXPECT_EQ(k, keys[i]);
    ++i;
  }
  const auto back = certificate_from_json(j);
  EXPECT_EQ(back.constant, 3.0);
  EXPECT_EQ(back.quadrature->nodes, 64);
  EXPECT_EQ(back.quadrature->rule, QuadRule::kMidpoint);
  EXPECT_EQ(back.target_norm.s, 1);
  EXPECT_EQ(back.notes, c.notes);
}
