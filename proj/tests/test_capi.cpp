#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>

#include "doctest.h"
#include "specglue/specglue.h"

TEST_CASE("spectrum lifecycle through the C interface") {
  sg_spectrum* s = nullptr;
  REQUIRE(sg_spectrum_torus(1.0, 1.0, 0.5, 0.5, 900.0, 1, &s) == SG_OK);
  CHECK(sg_spectrum_mode_count(s) > 0);
  CHECK(sg_spectrum_dimension(s) == 3);
  CHECK(sg_spectrum_acyclic(s) == 1);
  CHECK(sg_spectrum_tail_estimate(s) >= 0.0);

  const char* path = "./capi_spectrum.txt";
  CHECK(sg_spectrum_save(s, path) == SG_OK);
  sg_spectrum* loaded = nullptr;
  CHECK(sg_spectrum_load(path, &loaded) == SG_OK);
  CHECK(sg_spectrum_mode_count(loaded) == sg_spectrum_mode_count(s));

  sg_spectrum* cut = nullptr;
  CHECK(sg_spectrum_truncate(s, 100.0, &cut) == SG_OK);
  CHECK(sg_spectrum_mode_count(cut) < sg_spectrum_mode_count(s));

  sg_spectrum_free(cut);
  sg_spectrum_free(loaded);
  sg_spectrum_free(s);
  std::remove(path);
}

TEST_CASE("error reporting") {
  sg_spectrum* s = nullptr;
  CHECK(sg_spectrum_torus(1.0, 1.0, 0.0, 0.0, 900.0, 1, &s) ==
        SG_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(sg_last_error()) > 0);
  CHECK(sg_spectrum_load("./no_such_file.txt", &s) == SG_ERR_IO);
  CHECK(sg_spectrum_torus(1.0, 1.0, 0.5, 0.5, 900.0, 1, nullptr) ==
        SG_ERR_INVALID_ARGUMENT);
}

TEST_CASE("runs and report access") {
  sg_spectrum* s = nullptr;
  REQUIRE(sg_spectrum_torus(1.0, 1.0, 0.5, 0.5, 900.0, 1, &s) == SG_OK);

  sg_report* rep = nullptr;
  double r = 1.0;
  REQUIRE(sg_run_det(s, "rel", 1, &r, 1, 1e-6, &rep) == SG_OK);
  REQUIRE(sg_report_rows(rep) == 1);
  CHECK(sg_report_cols(rep) == 9);
  CHECK(std::string(sg_report_column(rep, 0)) == "quantity");
  char buf[128];
  CHECK(sg_report_cell(rep, 0, 0, buf, sizeof buf) == SG_OK);
  CHECK(std::string(buf) == "cylinder_logdet");
  double lhs = sg_report_number(rep, 0, 1);
  double rhs = sg_report_number(rep, 0, 2);
  CHECK(std::abs(lhs - rhs) < 1e-9);
  CHECK(std::isnan(sg_report_number(rep, 0, 0)));  // text cell
  CHECK(sg_report_pass(rep) == 1);

  const char* out = "./capi_report.json";
  CHECK(sg_report_write(rep, out, "json") == SG_OK);
  CHECK(sg_report_write(rep, out, "xml") == SG_ERR_INVALID_ARGUMENT);
  std::remove(out);

  CHECK(sg_report_meta_count(rep) > 0);
  char key[64], val[256];
  CHECK(sg_report_meta(rep, 0, key, sizeof key, val, sizeof val) == SG_OK);
  CHECK(std::string(key) == "version");

  sg_report_free(rep);

  sg_report* glue = nullptr;
  REQUIRE(sg_run_glue(s, "rel", 1, 1.0, 1.0, 1e-6, &glue) == SG_OK);
  CHECK(sg_report_pass(glue) == 1);
  sg_report_free(glue);

  sg_report* flow = nullptr;
  REQUIRE(sg_run_flow(4, 10, 11, 0.0, &flow) == SG_OK);
  CHECK(sg_report_rows(flow) == 10);
  CHECK(sg_report_pass(flow) == 1);
  sg_report_free(flow);

  sg_spectrum_free(s);
}
