"""Statistical tests and the distribution functions behind their p-values."""
from .bootstrap import BootstrapCI, bootstrap_ci, bootstrap_correlation, bootstrap_result
from .contingency import chi_square_test, contingency_table, fisher_exact
from .correlation import kendall_tau, pearson_r, pointbiserial_r, spearman_rho
from .distributions import (
    DistributionQuery,
    chi2_cdf,
    chi2_sf,
    f_cdf,
    f_sf,
    normal_cdf,
    normal_sf,
    reg_inc_beta,
    reg_inc_gamma,
    reg_inc_gamma_upper,
    t_cdf,
    t_sf,
)
from .means import factorial_anova, independent_t, one_way_anova, paired_t, rm_one_way_anova
from .ranks import friedman, kruskal_wallis, mann_whitney_u, wilcoxon_signed_rank
from .result import TestResult, rankdata

__all__ = [
    "BootstrapCI", "DistributionQuery", "TestResult",
    "bootstrap_ci", "bootstrap_correlation", "bootstrap_result", "chi2_cdf", "chi2_sf", "chi_square_test",
    "contingency_table", "f_cdf", "f_sf", "factorial_anova", "fisher_exact", "friedman",
    "independent_t", "kendall_tau", "kruskal_wallis", "mann_whitney_u", "normal_cdf",
    "normal_sf", "one_way_anova", "paired_t", "pearson_r", "pointbiserial_r", "rankdata",
    "reg_inc_beta", "reg_inc_gamma", "reg_inc_gamma_upper", "rm_one_way_anova",
    "spearman_rho", "t_cdf", "t_sf", "wilcoxon_signed_rank",
]
