//! Classifiers and cross-validation: Gaussian Naive Bayes, SMO-trained
//! SVM, and stratified k-fold evaluation.

mod cv;
mod nb;
mod svm;

pub use cv::{cross_validate, stratified_folds, ClassifierSpec, CvConfig, CvReport, FoldResult};
pub use nb::{nb_predict, nb_train, GaussianNbModel};
pub use svm::{smo_solve, svm_predict, svm_train, KernelSpec, SmoSolution, SvmModel};
