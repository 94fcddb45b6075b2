"""
Source package for the Bell-sampling stabilizer learner.
Contains the F2 algebra, the stabilizer simulators and the learning algorithm.
"""
