#include <stdio.h>
#include <string.h>

#include "monoid_recon.h"

#define CHECK(cond)                                              \
    do {                                                         \
        if (!(cond)) {                                           \
            fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
            return 1;                                            \
        }                                                        \
    } while (0)

int main(void) {
    MrMonoid *b = NULL;
    size_t n = 0;
    CHECK(mr_monoid_corpus("B", &b) == MR_OK);
    CHECK(mr_monoid_ideal_count(b, &n) == MR_OK && n == 3);
    CHECK(mr_monoid_prime_count(b, &n) == MR_OK && n == 2);
    CHECK(mr_monoid_topology_count(b, &n) == MR_OK && n == 3);
    mr_monoid_free(b);

    MrScheme *x = NULL;
    CHECK(mr_scheme_corpus("X2", &x) == MR_OK);
    CHECK(mr_scheme_point_count(x, &n) == MR_OK && n == 4);
    CHECK(mr_scheme_centre_size(x, &n) == MR_OK && n == 5);
    mr_scheme_free(x);

    MrMonoid *bad = NULL;
    CHECK(mr_monoid_parse("monoid Q 2 0\n0 1\n1 x\n", &bad) == MR_PARSE_ERROR);
    CHECK(bad == NULL);
    CHECK(strstr(mr_last_error_message(), "line 3") != NULL);

    MrReport *r = NULL;
    const char *records = NULL;
    CHECK(mr_verify_corpus("reconstruction", &r) == MR_OK);
    CHECK(mr_report_failures(r, &n) == MR_OK && n == 0);
    CHECK(mr_report_records(r, &records) == MR_OK);
    CHECK(strncmp(records, "# monoid-recon ", 15) == 0);
    mr_report_free(r);

    printf("ok %s\n", mr_version());
    return 0;
}
