#include <stdio.h>
#include "fctp.h"

int main(void) {
    const char *text =
        "fctp 1\n1 1\ncapacity: 10\nopening: 5\nunitcost: 2\ndemand: 10\n"
        "fixed:\n3\ncost:\n4\nemissions: 0.02 0.02 0.04 0.04 150000\n";
    FctpInstance *inst = NULL;
    FctpSolveResult *res = NULL;
    FctpCost cost;
    if (fctp_instance_parse(text, &inst) != FCTP_STATUS_OK) return 1;
    if (fctp_solve(inst, FCTP_VARIANT_DY10, FCTP_GHG_UNWEIGHTED, 3, &res) != FCTP_STATUS_OK) return 2;
    if (fctp_result_cost(res, &cost) != FCTP_STATUS_OK) return 3;
    if (fctp_solve(NULL, 0, 0, 0, &res) != FCTP_STATUS_NULL_POINTER) return 4;
    printf("Z=%g\n", cost.total);
    fctp_result_free(res);
    fctp_instance_free(inst);
    return 0;
}
