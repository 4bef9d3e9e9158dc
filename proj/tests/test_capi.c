/* Exercises the shared library through bernfilter.h only. */
#include "bernfilter/bernfilter.h"

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>
#include <sys/stat.h>

static int failures = 0;

#define CHECK(cond)                                                   \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: CHECK failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                     \
    }                                                                 \
  } while (0)

#define CHECK_OK(expr) CHECK((expr) == BF_OK)
#define CHECK_NEAR(a, b, tol) CHECK(fabs((a) - (b)) <= (tol))

static char scratch[1024];

static const char* path_in_scratch(const char* name) {
  static char buf[2048];
  snprintf(buf, sizeof buf, "%s/%s", scratch, name);
  return buf;
}

static void test_status_and_errors(void) {
  bf_graph* g = NULL;
  CHECK(strcmp(bf_status_name(BF_OK), "ok") == 0);
  CHECK(strlen(bf_version()) > 0);

  CHECK(bf_graph_grid(3, 3, NULL) == BF_ERR_NULL_POINTER);
  CHECK(strlen(bf_last_error()) > 0);

  {
    /* Self-loops are dropped, not rejected. */
    const int64_t src[] = {0, 1};
    const int64_t dst[] = {1, 1};
    CHECK_OK(bf_graph_from_edges(src, dst, 2, 2, &g));
    CHECK(bf_graph_num_edges(g) == 1);
    bf_graph_free(g);
    g = NULL;
  }
  {
    const int64_t src[] = {0};
    const int64_t dst[] = {1};
    CHECK(bf_graph_from_edges(src, dst, 1, 0, &g) == BF_ERR_INVALID_ARGUMENT);
    CHECK(g == NULL);
  }
  {
    const int64_t src[] = {0};
    const int64_t dst[] = {5};
    CHECK(bf_graph_from_edges(src, dst, 1, 3, &g) == BF_ERR_OUT_OF_RANGE);
  }
  {
    bf_coeffs* c = NULL;
    CHECK(bf_coeffs_design("no_such_filter", 4, &c) == BF_ERR_UNKNOWN_NAME);
    CHECK(strstr(bf_last_error(), "no_such_filter") != NULL);
    CHECK(bf_coeffs_design("all_pass", 65, &c) == BF_ERR_OUT_OF_RANGE);
    CHECK(c == NULL);
  }
  CHECK(bf_graph_load(path_in_scratch("missing.txt"), 0, &g) == BF_ERR_IO);

  /* Free functions tolerate NULL. */
  bf_graph_free(NULL);
  bf_coeffs_free(NULL);
  bf_spectrum_free(NULL);
  bf_fit_free(NULL);
  bf_dataset_free(NULL);
  bf_split_free(NULL);
  bf_training_free(NULL);
  bf_buffer_free(NULL);
  bf_mask_free(NULL);
}

static void test_graph_and_laplacian(void) {
  /* 4-cycle: L e0 = [1, -1/2, 0, -1/2]. */
  const int64_t src[] = {0, 1, 2, 3};
  const int64_t dst[] = {1, 2, 3, 0};
  bf_graph* g = NULL;
  CHECK_OK(bf_graph_from_edges(src, dst, 4, 4, &g));
  CHECK(bf_graph_num_nodes(g) == 4);
  CHECK(bf_graph_num_edges(g) == 4);
  {
    size_t deg[4];
    CHECK_OK(bf_graph_degrees(g, deg, 4));
    CHECK(deg[0] == 2 && deg[3] == 2);
  }
  {
    const double e0[] = {1, 0, 0, 0};
    double y[4];
    CHECK_OK(bf_laplacian_matvec(g, e0, y, 4));
    CHECK_NEAR(y[0], 1.0, 1e-15);
    CHECK_NEAR(y[1], -0.5, 1e-15);
    CHECK_NEAR(y[2], 0.0, 1e-15);
    CHECK_NEAR(y[3], -0.5, 1e-15);
    CHECK(bf_laplacian_matvec(g, e0, y, 3) == BF_ERR_DIMENSION_MISMATCH);
  }
  CHECK_OK(bf_graph_save(g, path_in_scratch("cycle.txt")));
  {
    bf_graph* back = NULL;
    CHECK_OK(bf_graph_load(path_in_scratch("cycle.txt"), 0, &back));
    CHECK(bf_graph_num_edges(back) == 4);
    bf_graph_free(back);
  }
  bf_graph_free(g);
}

static void test_coeffs_and_filters(void) {
  bf_coeffs* c = NULL;
  double theta[5];
  double v = 0.0;
  size_t i;
  CHECK_OK(bf_coeffs_design("linear_low", 4, &c));
  CHECK(bf_coeffs_order(c) == 4);
  CHECK_OK(bf_coeffs_theta(c, theta, 5));
  CHECK_NEAR(theta[0], 1.0, 1e-15);
  CHECK_NEAR(theta[1], 0.75, 1e-15);
  CHECK_NEAR(theta[4], 0.0, 1e-15);
  CHECK(bf_coeffs_theta(c, theta, 4) == BF_ERR_DIMENSION_MISMATCH);
  CHECK_OK(bf_eval_filter(c, 0.5, &v));
  CHECK_NEAR(v, 0.75, 1e-14);
  CHECK_OK(bf_named_filter_eval("exp_low", 1.0, &v));
  CHECK_NEAR(v, exp(-10.0), 1e-15);

  {
    bf_validity_report r;
    CHECK_OK(bf_validate(c, 1000, &r));
    CHECK(r.nonneg_ok && r.bounded_ok);
    CHECK(r.violation_count == 0);
  }
  CHECK_OK(bf_coeffs_save(c, path_in_scratch("low.txt")));
  {
    bf_coeffs* back = NULL;
    double t2[5];
    CHECK_OK(bf_coeffs_load(path_in_scratch("low.txt"), &back));
    CHECK_OK(bf_coeffs_theta(back, t2, 5));
    CHECK(memcmp(theta, t2, sizeof theta) == 0);
    bf_coeffs_free(back);
  }
  CHECK_OK(bf_coeffs_save_csv(c, path_in_scratch("low.csv")));
  CHECK_OK(bf_export_curve(c, 11, path_in_scratch("curve.csv")));
  bf_coeffs_free(c);

  /* 1 - lambda in t = lambda / 2 is 1 - 2t; it dips to -1 at lambda = 2. */
  {
    const double w[] = {1, -2};
    bf_validity_report r;
    CHECK_OK(bf_coeffs_from_monomial(w, 2, &c));
    CHECK_OK(bf_validate(c, 1000, &r));
    CHECK(!r.nonneg_ok);
    CHECK_NEAR(r.min_value, -1.0, 1e-12);
    CHECK_NEAR(r.argmin_lambda, 2.0, 1e-12);
    bf_coeffs_free(c);
  }
  {
    const double bad[] = {1, NAN};
    CHECK(bf_coeffs_create(bad, 2, &c) == BF_ERR_NON_FINITE);
  }

  /* Bernstein basis sums to one. */
  {
    double b = 0.0;
    double sum = 0.0;
    int k;
    for (k = 0; k <= 7; ++k) {
      CHECK_OK(bf_bernstein_basis(k, 7, 0.3, &b));
      sum += b;
    }
    CHECK_NEAR(sum, 1.0, 1e-14);
    CHECK(bf_bernstein_basis(8, 7, 0.3, &b) == BF_ERR_OUT_OF_RANGE);
  }

  CHECK(bf_filter_catalog_size() >= 10);
  for (i = 0; i < bf_filter_catalog_size(); ++i) CHECK(bf_filter_catalog_name(i) != NULL);
  CHECK(bf_filter_catalog_name(bf_filter_catalog_size()) == NULL);
}

static void test_apply_and_spectrum(void) {
  bf_graph* g = NULL;
  bf_coeffs* low = NULL;
  bf_spectrum* s = NULL;
  double x[16];
  double y[16];
  double z[16];
  double lx[16];
  double ev[16];
  size_t i;
  CHECK_OK(bf_graph_grid(4, 4, &g));
  CHECK_OK(bf_synth_grid_signal(4, 4, 7, "random", x, 16));
  CHECK_OK(bf_coeffs_design("linear_low", 10, &low));
  CHECK_OK(bf_apply(g, low, x, 16, 1, y));
  CHECK_OK(bf_laplacian_matvec(g, x, lx, 16));
  for (i = 0; i < 16; ++i) CHECK_NEAR(y[i], x[i] - 0.5 * lx[i], 1e-10);

  CHECK_OK(bf_spectrum_compute(g, &s));
  CHECK(bf_spectrum_size(s) == 16);
  CHECK_OK(bf_spectrum_eigenvalues(s, ev, 16));
  CHECK_NEAR(ev[0], 0.0, 1e-10);
  for (i = 1; i < 16; ++i) CHECK(ev[i] >= ev[i - 1]);
  CHECK_OK(bf_spectrum_filter(s, "linear_low", x, 16, z));
  for (i = 0; i < 16; ++i) CHECK_NEAR(z[i], y[i], 1e-10);

  /* Two-column block: each column filtered independently. */
  {
    double block[32];
    double out[32];
    for (i = 0; i < 16; ++i) {
      block[2 * i] = x[i];
      block[2 * i + 1] = 2.0 * x[i];
    }
    CHECK_OK(bf_apply(g, low, block, 16, 2, out));
    for (i = 0; i < 16; ++i) {
      CHECK_NEAR(out[2 * i], y[i], 1e-12);
      CHECK_NEAR(out[2 * i + 1], 2.0 * y[i], 1e-12);
    }
  }
  CHECK(bf_apply(g, low, x, 15, 1, y) == BF_ERR_DIMENSION_MISMATCH);

  CHECK_OK(bf_matrix_save(path_in_scratch("x.csv"), x, 16, 1));
  {
    double* data = NULL;
    size_t rows = 0;
    size_t cols = 0;
    CHECK_OK(bf_matrix_load(path_in_scratch("x.csv"), &data, &rows, &cols));
    CHECK(rows == 16 && cols == 1);
    CHECK(data != NULL && memcmp(data, x, sizeof x) == 0);
    bf_buffer_free(data);
  }
  bf_spectrum_free(s);
  bf_coeffs_free(low);
  bf_graph_free(g);
}

static void test_learning(void) {
  bf_graph* g = NULL;
  bf_spectrum* s = NULL;
  bf_fit* fit = NULL;
  bf_coeffs* c = NULL;
  bf_learn_config cfg;
  double x[64];
  double target[64];
  unsigned char mask[64];
  double theta[6];
  double* losses;
  size_t i;
  CHECK_OK(bf_graph_grid(8, 8, &g));
  CHECK_OK(bf_synth_grid_signal(8, 8, 3, "random", x, 64));
  CHECK_OK(bf_spectrum_compute(g, &s));
  CHECK_OK(bf_spectrum_filter(s, "exp_low", x, 64, target));
  CHECK_OK(bf_grid_interior_mask(8, 8, mask, 64));
  bf_learn_config_default(&cfg);
  CHECK(cfg.order == 10 && cfg.layers == 1 && cfg.patience == 100);
  cfg.order = 5;
  CHECK_OK(bf_learn_filter(g, x, target, mask, 64, &cfg, &fit));
  CHECK(bf_fit_r2(fit) > 0.5);
  CHECK(bf_fit_best_epoch(fit) <= bf_fit_epochs(fit));
  CHECK_OK(bf_fit_coeffs(fit, &c));
  CHECK_OK(bf_coeffs_theta(c, theta, 6));
  for (i = 0; i < 6; ++i) CHECK(theta[i] >= 0.0);
  losses = malloc(bf_fit_loss_count(fit) * sizeof *losses);
  CHECK_OK(bf_fit_losses(fit, losses, bf_fit_loss_count(fit)));
  CHECK(losses[bf_fit_loss_count(fit) - 1] <= losses[0]);
  free(losses);
  {
    double pred[64];
    double sse = 0.0;
    double r2 = 0.0;
    CHECK_OK(bf_fit_prediction(fit, pred, 64));
    CHECK_OK(bf_score(pred, target, mask, 64, &sse, &r2));
    CHECK_NEAR(sse, bf_fit_sse(fit), 1e-12);
    CHECK_NEAR(r2, bf_fit_r2(fit), 1e-12);
  }
  cfg.layers = 3;
  CHECK(bf_learn_filter(g, x, target, NULL, 64, &cfg, &fit) == BF_ERR_INVALID_ARGUMENT);
  bf_coeffs_free(c);
  bf_fit_free(fit);
  bf_spectrum_free(s);
  bf_graph_free(g);
}

static void test_training(void) {
  bf_dataset* d = NULL;
  bf_split* split = NULL;
  bf_training* t = NULL;
  bf_train_config cfg;
  size_t tr = 0;
  size_t va = 0;
  size_t te = 0;
  CHECK_OK(bf_dataset_two_cluster(20, 0.3, 5, &d));
  CHECK(bf_dataset_num_nodes(d) == 40);
  CHECK(bf_dataset_num_features(d) == 2);
  CHECK(bf_dataset_num_classes(d) == 2);
  CHECK_OK(bf_split_random(40, 1, &split));
  CHECK_OK(bf_split_sizes(split, &tr, &va, &te));
  CHECK(tr == 24 && va == 8 && te == 8);
  CHECK_OK(bf_split_save(split, path_in_scratch("split.txt")));
  {
    bf_split* back = NULL;
    size_t a = 0, b = 0, c = 0;
    CHECK_OK(bf_split_load(path_in_scratch("split.txt"), &back));
    CHECK_OK(bf_split_sizes(back, &a, &b, &c));
    CHECK(a == tr && b == va && c == te);
    bf_split_free(back);
  }
  bf_train_config_default(&cfg);
  cfg.max_epochs = 200;
  CHECK_OK(bf_train(d, split, &cfg, &t));
  CHECK(bf_training_test_accuracy(t) >= 0.9);
  CHECK(bf_training_val_accuracy(t) >= 0.0 && bf_training_val_accuracy(t) <= 1.0);
  CHECK(bf_training_epochs(t) <= 200);
  CHECK(bf_training_missing_classes(t) == 0);
  {
    bf_coeffs* c = NULL;
    CHECK_OK(bf_training_coeffs(t, &c));
    CHECK(bf_coeffs_order(c) == cfg.order);
    bf_coeffs_free(c);
  }
  CHECK_OK(bf_dataset_save(d, path_in_scratch("ds")));
  {
    bf_dataset* back = NULL;
    CHECK_OK(bf_dataset_load(path_in_scratch("ds"), 0, &back));
    CHECK(bf_dataset_num_nodes(back) == 40);
    bf_dataset_free(back);
  }
  cfg.hidden = 0;
  {
    bf_training* bad = NULL;
    CHECK(bf_train(d, split, &cfg, &bad) != BF_OK);
    CHECK(bad == NULL);
  }
  bf_training_free(t);
  bf_split_free(split);
  bf_dataset_free(d);
}

int main(int argc, char** argv) {
  snprintf(scratch, sizeof scratch, "%s", argc > 1 ? argv[1] : "capi_scratch");
  mkdir(scratch, 0755);

  test_status_and_errors();
  test_graph_and_laplacian();
  test_coeffs_and_filters();
  test_apply_and_spectrum();
  test_learning();
  test_training();

  if (failures) {
    fprintf(stderr, "%d check(s) failed\n", failures);
    return 1;
  }
  printf("all C API checks passed\n");
  return 0;
}
