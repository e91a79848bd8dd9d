from .point_cloud import PointCloud as PointCloud
from .graph import Graph as Graph, Laplacian as Laplacian
from .partition import Partition as Partition, Neighborhood as Neighborhood
from .basis import BasisMatrix as BasisMatrix
from .signal import SignalData as SignalData
