/* Compile-and-run check that the public header works from plain C. */
#include <stdio.h>
#include <string.h>

#include "hardmdp.h"

#define NEED(cond)                                                  \
  do {                                                              \
    if (!(cond)) {                                                  \
      fprintf(stderr, "FAIL %s:%d: %s (last error: %s)\n",          \
              __FILE__, __LINE__, #cond, hardmdp_last_error());     \
      return 1;                                                     \
    }                                                               \
  } while (0)

static const char* kDimacs =
    "p cnf 4 7\n"
    "1 2 3 0\n-1 2 3 0\n-1 3 4 0\n1 2 -3 0\n-1 2 -3 0\n-3 -3 -3 0\n1 1 1 0\n";

int main(void) {
  hardmdp_formula* f = NULL;
  NEED(hardmdp_formula_parse(kDimacs, &f) == HARDMDP_OK);
  NEED(hardmdp_formula_vars(f) == 4);

  int sat = -1;
  NEED(hardmdp_formula_evaluate(f, "++-+", &sat) == HARDMDP_OK && sat == 1);

  hardmdp_instance* inst = NULL;
  NEED(hardmdp_instance_create(f, 2, 3, "reduction", NULL, &inst) == HARDMDP_OK);
  char* h = NULL;
  NEED(hardmdp_instance_horizon(inst, &h) == HARDMDP_OK);
  NEED(strcmp(h, "16") == 0);
  hardmdp_free_string(h);

  hardmdp_oracle* o = NULL;
  NEED(hardmdp_oracle_create(inst, "simulator", 1, &o) == HARDMDP_OK);
  char* root = NULL;
  NEED(hardmdp_oracle_root(o, &root) == HARDMDP_OK);
  NEED(strcmp(root, "N:0:0") == 0);
  char* next = NULL;
  NEED(hardmdp_oracle_transition(o, root, 1, &next) == HARDMDP_OK);
  NEED(strcmp(next, "N:1:1") == 0);
  NEED(hardmdp_oracle_calls(o) == 1);
  int bit = -1;
  NEED(hardmdp_oracle_reward(o, "N:b:3", 1, &bit) == HARDMDP_OK);
  NEED(bit == 0 || bit == 1);
  hardmdp_free_string(next);
  hardmdp_free_string(root);
  hardmdp_oracle_free(o);

  char* report = NULL;
  int exit_code = -1;
  NEED(hardmdp_run_command("verify", "{\"dimacs\":\"p cnf 1 1\\n-1 -1 -1 0\\n\",\"r\":2}",
                           &report, NULL, &exit_code) == HARDMDP_OK);
  NEED(exit_code == 0);
  NEED(strstr(report, "\"value_law\"") != NULL);
  hardmdp_free_string(report);

  hardmdp_instance_free(inst);
  hardmdp_formula_free(f);
  return 0;
}
